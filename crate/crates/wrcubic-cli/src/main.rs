//! Command-line front end: batch verification and exploration of
//! well-rounded twists of ideal lattices in real cyclic cubic fields.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error.

// pipe-safe println: a closed stdout (e.g. piping into `head`) ends the
// process quietly instead of panicking
macro_rules! println {
    () => { println!("") };
    ($($arg:tt)*) => {{
        use ::std::io::Write as _;
        let mut __out = ::std::io::stdout().lock();
        if ::std::writeln!(__out, $($arg)*).is_err() {
            ::std::process::exit(0);
        }
    }};
}

mod config;
mod report;

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_traits::Signed;
use serde::Serialize;

use wrcubic_core::families::{
    admissible_cases, family_good_basis, make_family_field, BasisCase, Family, FamilyInstance,
    GoodBasisCase,
};
use wrcubic_core::field::{conductor_params, CubicField};
use wrcubic_core::lattice::{is_wr_lattice, LatticeBasis3};
use wrcubic_core::ramified::{ideal_basis, ideal_wr_status, RamifiedError, RamifiedSpec, WrReason};
use wrcubic_core::rat::parse_rat_list;
use wrcubic_core::twist::{
    good_basis_search, orthogonal_twist, test_good_basis_with_link, TwistError,
};
use wrcubic_core::{FieldElement, Rat};

use config::{FileConfig, RunConfig};
use report::{
    construction_str, field_json, ideal_elements_json, ortho_json, rat_str, twist_json, GramJson,
    IdealJson, OrthoJson, Report, TwistReportJson,
};

const ENUM_BUDGET: usize = 8_000_000;
const LINK_T_CAP: u32 = 4;

#[derive(Parser)]
#[command(
    name = "wrcubic",
    version,
    about = "Well-rounded twists of ideal lattices in real cyclic cubic fields, in exact arithmetic",
    after_help = "Basis coordinates are semicolon-separated rows of comma-separated rationals \
                  on the power basis of the defining root, e.g. \"1,0,0;0,1,0;1/3,1/3,1/3\"."
)]
struct Cli {
    /// TOML config file mirroring the global flags (explicit flags win)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<std::path::PathBuf>,
    /// Emit a machine-readable JSON report (rationals as exact strings)
    #[arg(long, global = true)]
    json: bool,
    /// RNG seed for randomized search (default 0)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Bits of precision for printed root enclosures (default 128)
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Iteration budget for randomized search (default 2000)
    #[arg(long, global = true)]
    iterations: Option<u64>,
    /// Coefficient bound for random elementary matrices (default 3)
    #[arg(long, global = true)]
    coeff_bound: Option<i64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a cyclic cubic field from its conductor and print invariants
    Field(FieldCmd),
    /// Build a Shanks/Washington/Kishi instance: gates, bases, good bases
    Family(FamilyCmd),
    /// Run the good-basis test on user-supplied basis coordinates
    TestBasis(TestBasisCmd),
    /// Randomized good-basis search from the integral basis
    Search(TargetCmd),
    /// Construct a ramified ideal and decide its well-roundedness
    Ideal(IdealCmd),
    /// Attempt an orthogonal-twist certificate from the different ideal
    Ortho(TargetCmd),
    /// Sweep a family parameter range against the published good bases
    VerifyFamily(VerifyFamilyCmd),
}

#[derive(Args)]
struct FieldCmd {
    /// Conductor of the field
    #[arg(long, value_name = "M")]
    field_conductor: u64,
}

#[derive(Args)]
struct FamilyCmd {
    /// Family name: shanks | washington | kishi
    family: String,
    /// Family parameter
    #[arg(short = 'n', long = "n", allow_hyphen_values = true)]
    n: i64,
    /// Also test the published good bases (all admissible cases, or --case)
    #[arg(long)]
    good_basis: bool,
    /// Restrict to one published case (e.g. wash-2b, kishi-1)
    #[arg(long, value_name = "ID")]
    case: Option<String>,
}

#[derive(Args)]
struct TestBasisCmd {
    /// Conductor of the field (alternative to --family/-n)
    #[arg(long, value_name = "M")]
    field_conductor: Option<u64>,
    /// Family name (with -n) as an alternative to --field-conductor
    #[arg(long)]
    family: Option<String>,
    #[arg(short = 'n', long = "n", allow_hyphen_values = true)]
    n: Option<i64>,
    /// Basis rows "c00,c01,c02;c10,c11,c12;c20,c21,c22"
    #[arg(long, value_name = "ROWS")]
    coords: String,
}

#[derive(Args)]
struct TargetCmd {
    /// Conductor of the field (alternative to --family/-n)
    #[arg(long, value_name = "M")]
    field_conductor: Option<u64>,
    /// Family name (with -n) as an alternative to --field-conductor
    #[arg(long)]
    family: Option<String>,
    #[arg(short = 'n', long = "n", allow_hyphen_values = true)]
    n: Option<i64>,
}

#[derive(Args)]
struct IdealCmd {
    /// Conductor of the field
    #[arg(long, value_name = "M")]
    field_conductor: u64,
    /// Exponent of the prime above 3 (requires 3 | m)
    #[arg(long, default_value_t = 0)]
    p0: u8,
    /// Comma-separated primes entering squared, e.g. --i 7,13
    #[arg(long, value_name = "PRIMES")]
    i: Option<String>,
    /// Comma-separated primes entering to the first power
    #[arg(long, value_name = "PRIMES")]
    j: Option<String>,
}

#[derive(Args)]
struct VerifyFamilyCmd {
    /// Family name: shanks | washington | kishi
    family: String,
    /// Inclusive parameter range "a..b"
    #[arg(long, value_name = "A..B", allow_hyphen_values = true)]
    n_range: String,
    /// Restrict to one published case
    #[arg(long, value_name = "ID")]
    case: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_cfg = match &cli.config {
        Some(path) => match config::load_file(path) {
            Ok(c) => c,
            Err(e) => return usage_error(&e),
        },
        None => FileConfig::default(),
    };
    let cfg = match RunConfig::resolve(
        &file_cfg,
        cli.seed,
        cli.precision,
        cli.iterations,
        cli.coeff_bound,
        cli.json,
    ) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };
    match &cli.cmd {
        Cmd::Field(a) => cmd_field(a, cfg),
        Cmd::Family(a) => cmd_family(a, cfg),
        Cmd::TestBasis(a) => cmd_test_basis(a, cfg),
        Cmd::Search(a) => cmd_search(a, cfg),
        Cmd::Ideal(a) => cmd_ideal(a, cfg),
        Cmd::Ortho(a) => cmd_ortho(a, cfg),
        Cmd::VerifyFamily(a) => cmd_verify_family(a, cfg),
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn field_from_conductor(m: u64) -> Result<Arc<CubicField>, String> {
    let cd = conductor_params(m).map_err(|e| format!("conductor {m}: {e}"))?;
    CubicField::from_conductor(&cd).map_err(|e| format!("conductor {m}: {e}"))
}

fn parse_family(name: &str) -> Result<Family, String> {
    Family::parse(name).ok_or_else(|| format!("unknown family '{name}' (shanks|washington|kishi)"))
}

/// Case ids accept the full name ("wash-2b") or a family-local alias
/// ("1", "2a", "2b" for Washington, "1".."6" rows with sub-letters for
/// Kishi, "shanks" or "default" for Shanks).
fn resolve_case(family: Option<Family>, s: &str) -> Option<GoodBasisCase> {
    if let Some(c) = GoodBasisCase::parse(s) {
        return Some(c);
    }
    match family {
        Some(Family::Washington) => GoodBasisCase::parse(&format!("wash-{s}")),
        Some(Family::Kishi) => GoodBasisCase::parse(&format!("kishi-{s}")),
        Some(Family::Shanks) if s == "default" || s == "1" => Some(GoodBasisCase::Shanks),
        _ => None,
    }
}

fn instance(family: &str, n: i64) -> Result<FamilyInstance, String> {
    let fam = parse_family(family)?;
    make_family_field(fam, n).map_err(|e| format!("{family} n={n}: {e}"))
}

/// Resolves `--field-conductor` vs `--family -n` target selectors.
fn target_field(
    conductor: Option<u64>,
    family: &Option<String>,
    n: Option<i64>,
) -> Result<Arc<CubicField>, String> {
    match (conductor, family) {
        (Some(m), None) => field_from_conductor(m),
        (None, Some(f)) => {
            let n = n.ok_or("missing -n for --family")?;
            let inst = instance(f, n)?;
            if inst.basis_case == BasisCase::Unknown {
                return Err(format!(
                    "{f} n={n}: integral basis unknown (gate failed); cannot proceed"
                ));
            }
            Ok(inst.field)
        }
        _ => Err("exactly one of --field-conductor or --family (with -n) is required".into()),
    }
}

fn print_gram_human(g: &wrcubic_core::GramMatrix3) {
    let rows = [
        [g.s11.to_string(), g.u.to_string(), g.v.to_string()],
        [g.u.to_string(), g.s22.to_string(), g.w.to_string()],
        [g.v.to_string(), g.w.to_string(), g.s33.to_string()],
    ];
    let width = rows.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    for r in rows {
        println!(
            "    [ {:>w$}  {:>w$}  {:>w$} ]",
            r[0],
            r[1],
            r[2],
            w = width
        );
    }
    if let Some(s) = g.equal_diagonal() {
        // slack of the two criterion inequality families, for inspection
        let half = s / wrcubic_core::rat::rat_i(2);
        let m1 = g.u.abs().max(g.v.abs()).max(g.w.abs());
        let combos = [
            -g.u.clone() + &g.v + &g.w,
            g.u.clone() - &g.v + &g.w,
            g.u.clone() + &g.v - &g.w,
            -g.u.clone() - &g.v - &g.w,
        ];
        let m2 = combos.iter().cloned().reduce(|a, b| a.max(b)).unwrap();
        println!("    criterion slack: s/2 - max|u,v,w| = {}", half - m1);
        println!("    criterion slack: s - max(combos)  = {}", s - m2);
    }
}

fn cmd_field(a: &FieldCmd, cfg: RunConfig) -> ExitCode {
    let field = match field_from_conductor(a.field_conductor) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let item = field_json(&field, cfg.precision);
    if cfg.json {
        Report::new("field", vec![item]).print();
        return ExitCode::SUCCESS;
    }
    let cd = field.conductor().unwrap();
    println!(
        "conductor m = {} with 4m = a^2 + 3b^2, (a, b) = ({}, {})",
        cd.m, cd.a, cd.b
    );
    println!("defining polynomial: {}", item.min_poly);
    println!("field discriminant:  {}", item.discriminant);
    println!(
        "t invariant (< 0 by the generator convention): {}",
        item.t_invariant
    );
    println!("integral basis rows on (1, r, r^2):");
    for row in &item.integral_basis {
        println!("    [{}, {}, {}]", row[0], row[1], row[2]);
    }
    println!("Galois matrix (columns s(1), s(r), s(r^2)):");
    for row in &item.galois_matrix {
        println!("    [{}, {}, {}]", row[0], row[1], row[2]);
    }
    println!(
        "root enclosures of r and its conjugates at {} bits:",
        cfg.precision
    );
    for (i, r) in item.roots.iter().enumerate() {
        println!("    conjugate {i}: [{}, {}]", r[0], r[1]);
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct GoodBasisJson {
    case: String,
    report: TwistReportJson,
    expected_gram: Option<GramJson>,
    matches_expected: Option<bool>,
}

#[derive(Serialize)]
struct FamilyJson {
    family: String,
    n: i64,
    basis_case: String,
    gates: Vec<[String; 2]>,
    discriminant: String,
    integral_basis: Option<[[String; 3]; 3]>,
    good_bases: Vec<GoodBasisJson>,
}

fn run_good_case(inst: &FamilyInstance, case: GoodBasisCase) -> Result<GoodBasisJson, String> {
    let gb = family_good_basis(inst, case).map_err(|e| format!("{}: {e}", case.name()))?;
    let rep = test_good_basis_with_link(&gb.basis, LINK_T_CAP, ENUM_BUDGET)
        .map_err(|e| format!("{}: {e}", case.name()))?;
    let matches = gb
        .expected_gram
        .as_ref()
        .map(|exp| rep.twisted_gram.as_ref() == Some(exp));
    Ok(GoodBasisJson {
        case: case.name().to_string(),
        expected_gram: gb.expected_gram.as_ref().map(GramJson::from),
        matches_expected: matches,
        report: twist_json(&rep),
    })
}

fn cmd_family(a: &FamilyCmd, cfg: RunConfig) -> ExitCode {
    let inst = match instance(&a.family, a.n) {
        Ok(i) => i,
        Err(e) => return usage_error(&e),
    };
    let mut good_bases = Vec::new();
    let mut mismatch = false;
    if a.good_basis {
        let cases: Vec<GoodBasisCase> = match &a.case {
            Some(c) => match resolve_case(Family::parse(&a.family), c) {
                Some(c) => vec![c],
                None => return usage_error(&format!("unknown case '{c}'")),
            },
            None => admissible_cases(&inst),
        };
        for case in cases {
            match run_good_case(&inst, case) {
                Ok(j) => {
                    if j.matches_expected == Some(false) || !j.report.is_good {
                        mismatch = true;
                    }
                    good_bases.push(j);
                }
                Err(e) => return usage_error(&e),
            }
        }
    }
    let item = FamilyJson {
        family: a.family.clone(),
        n: a.n,
        basis_case: inst.basis_case.to_string(),
        gates: inst
            .conditions
            .iter()
            .map(|(k, v)| [k.to_string(), v.to_string()])
            .collect(),
        discriminant: inst.field.discriminant().to_string(),
        integral_basis: (inst.basis_case != BasisCase::Unknown).then(|| {
            let ib = inst.field.integral_basis_rows();
            std::array::from_fn(|i| std::array::from_fn(|j| ib[i][j].to_string()))
        }),
        good_bases,
    };
    if cfg.json {
        Report::new("family", vec![item]).print();
    } else {
        println!(
            "{} n = {}: integral-basis case {}",
            a.family, a.n, item.basis_case
        );
        for g in &item.gates {
            println!("  gate: {} -> {}", g[0], g[1]);
        }
        println!("  discriminant of the working order: {}", item.discriminant);
        if let Some(ib) = &item.integral_basis {
            println!("  integral basis rows on (1, r, r^2):");
            for row in ib {
                println!("    [{}, {}, {}]", row[0], row[1], row[2]);
            }
        }
        for g in &item.good_bases {
            println!("  published good basis {}:", g.case);
            println!(
                "    sign_ok = {}, is_good = {}",
                g.report.sign_ok, g.report.is_good
            );
            if let Some(exp) = &g.matches_expected {
                println!("    matches published Gram polynomials: {exp}");
            }
            if let Some(gram) = &g.report.twisted_gram {
                println!(
                    "    twisted Gram: s = {}, u = {}, v = {}, w = {}",
                    gram.s11, gram.u, gram.v, gram.w
                );
            }
            if let Some(link) = &g.report.principal_link {
                println!(
                    "    principal link: k = {}, verified = {}",
                    link.k, link.verified
                );
            }
        }
    }
    if mismatch {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn parse_coords(s: &str, field: &Arc<CubicField>) -> Result<[FieldElement; 3], String> {
    let rows: Vec<&str> = s.split(';').collect();
    if rows.len() != 3 {
        return Err("expected three semicolon-separated rows".into());
    }
    let mut out: Vec<FieldElement> = Vec::new();
    for r in rows {
        let vals: Vec<Rat> =
            parse_rat_list(r).ok_or_else(|| format!("cannot parse rationals in '{r}'"))?;
        if vals.len() != 3 {
            return Err(format!("row '{r}' must have three entries"));
        }
        out.push(field.element([vals[0].clone(), vals[1].clone(), vals[2].clone()]));
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

fn cmd_test_basis(a: &TestBasisCmd, cfg: RunConfig) -> ExitCode {
    let field = match target_field(a.field_conductor, &a.family, a.n) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let basis = match parse_coords(&a.coords, &field) {
        Ok(b) => b,
        Err(e) => return usage_error(&e),
    };
    let rep = match test_good_basis_with_link(&basis, LINK_T_CAP, ENUM_BUDGET) {
        Ok(r) => r,
        Err(TwistError::DegenerateBasis) => {
            return usage_error("basis rows are linearly dependent")
        }
        Err(e) => return usage_error(&e.to_string()),
    };
    if cfg.json {
        Report::new("test-basis", vec![twist_json(&rep)]).print();
        return ExitCode::SUCCESS;
    }
    println!("alpha0 = {}", rep.alpha0);
    println!("e1 = {}, e2 = {}, e3 = {}", rep.e1, rep.e2, rep.e3);
    println!("sign test (e1*e3 > 0 and e2 > 0): {}", rep.sign_ok);
    if let Some(g) = &rep.twisted_gram {
        println!("twisted Gram:");
        print_gram_human(g);
    }
    println!("good basis: {}", rep.is_good);
    if let Some(link) = &rep.principal_link {
        println!(
            "principal link: alpha0 = k psi with k = {}, N(psi) = {}, similarity verified = {}",
            link.k,
            rat_str(&link.psi.norm()),
            link.verified
        );
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct SearchJson {
    seed: u64,
    iterations: u64,
    coeff_bound: i64,
    found: Vec<TwistReportJson>,
}

fn cmd_search(a: &TargetCmd, cfg: RunConfig) -> ExitCode {
    let field = match target_field(a.field_conductor, &a.family, a.n) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    if !field.maximal_order_known() {
        return usage_error("search needs a verified integral basis");
    }
    let b0 = field.integral_basis_elements();
    let mut found = good_basis_search(&b0, cfg.iterations, cfg.coeff_bound, cfg.seed);
    for rep in &mut found {
        if rep.principal_link.is_none() {
            rep.principal_link = wrcubic_core::twist::principal_link(rep, LINK_T_CAP, ENUM_BUDGET);
        }
    }
    let item = SearchJson {
        seed: cfg.seed,
        iterations: cfg.iterations,
        coeff_bound: cfg.coeff_bound,
        found: found.iter().map(twist_json).collect(),
    };
    if cfg.json {
        Report::new("search", vec![item]).print();
        return ExitCode::SUCCESS;
    }
    println!(
        "search: seed {}, {} iterations, coefficient bound {}",
        cfg.seed, cfg.iterations, cfg.coeff_bound
    );
    println!("distinct good twisted Grams found: {}", found.len());
    for (i, rep) in found.iter().enumerate() {
        let g = rep.twisted_gram.as_ref().unwrap();
        println!(
            "[{i}] basis: {} ; {} ; {}",
            rep.basis[0], rep.basis[1], rep.basis[2]
        );
        print_gram_human(g);
        if let Some(link) = &rep.principal_link {
            println!("    principal link verified: {}", link.verified);
        }
    }
    ExitCode::SUCCESS
}

fn parse_prime_list(s: &Option<String>) -> Result<Vec<u64>, String> {
    match s {
        None => Ok(Vec::new()),
        Some(t) if t.trim().is_empty() => Ok(Vec::new()),
        Some(t) => t
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|e| format!("bad prime '{p}': {e}"))
            })
            .collect(),
    }
}

fn cmd_ideal(a: &IdealCmd, cfg: RunConfig) -> ExitCode {
    let field = match field_from_conductor(a.field_conductor) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let (i_primes, j_primes) = match (parse_prime_list(&a.i), parse_prime_list(&a.j)) {
        (Ok(i), Ok(j)) => (i, j),
        (Err(e), _) | (_, Err(e)) => return usage_error(&e),
    };
    let spec = match RamifiedSpec::new(field, a.p0, i_primes, j_primes) {
        Ok(s) => s,
        Err(e) => return usage_error(&e.to_string()),
    };
    let (wr_formula, reason) = match ideal_wr_status(&spec) {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };
    let shape = format!(
        "P0^{} * P_I^2 * P_J with I = {:?}, J = {:?}",
        spec.p0_exp, spec.i_primes, spec.j_primes
    );
    let basis = match ideal_basis(&spec) {
        Ok(b) => Some(b),
        Err(RamifiedError::NotConstructible) => None,
        Err(e) => return usage_error(&e.to_string()),
    };
    let (gram, wr_enum, first_min) = match &basis {
        Some(b) => {
            let lat = LatticeBasis3::from_field_elements(&b.elements).expect("ideal lattice");
            match is_wr_lattice(&lat, ENUM_BUDGET) {
                Ok((wr, min, _)) => (
                    Some(GramJson::from(lat.gram())),
                    Some(wr),
                    Some(min.to_string()),
                ),
                Err(e) => return usage_error(&e.to_string()),
            }
        }
        None => (None, None, None),
    };
    let item = IdealJson {
        shape,
        claimed_norm: spec.norm().to_string(),
        construction: basis
            .as_ref()
            .map(|b| construction_str(b.construction))
            .unwrap_or("status_only")
            .to_string(),
        elements: basis.as_ref().map(ideal_elements_json),
        covolume_verified: basis.as_ref().map(|_| true),
        gram,
        wr_formula,
        reason: match reason {
            WrReason::ClosedFormInterval => "closed_form_interval".to_string(),
            WrReason::ProvenNotWr => "proven_not_wr".to_string(),
        },
        wr_enumeration: wr_enum,
        first_minimum: first_min,
    };
    let ok = item
        .wr_enumeration
        .map(|e| e == item.wr_formula)
        .unwrap_or(true);
    if cfg.json {
        Report::new("ideal", vec![item]).print();
    } else {
        println!("ideal {}", item.shape);
        println!("  norm: {}", item.claimed_norm);
        println!("  construction: {}", item.construction);
        if let Some(els) = &item.elements {
            for (k, e) in els.iter().enumerate() {
                println!("  generator {k}: [{}, {}, {}]", e[0], e[1], e[2]);
            }
        }
        println!("  WR by closed form: {} ({})", item.wr_formula, item.reason);
        if let Some(e) = item.wr_enumeration {
            println!("  WR by enumeration: {e}");
            println!(
                "  first minimum: {}",
                item.first_minimum.as_deref().unwrap_or("-")
            );
            println!("  formula agrees with enumeration: {ok}");
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[derive(Serialize)]
struct OrthoOutcomeJson {
    verified: bool,
    certificate: Option<OrthoJson>,
}

fn cmd_ortho(a: &TargetCmd, cfg: RunConfig) -> ExitCode {
    let field = match target_field(a.field_conductor, &a.family, a.n) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let outcome = match orthogonal_twist(&field) {
        Ok(cert) => OrthoOutcomeJson {
            verified: true,
            certificate: Some(ortho_json(&cert)),
        },
        Err(TwistError::OrthoUnverified) | Err(TwistError::NoIntegralBasis) => OrthoOutcomeJson {
            verified: false,
            certificate: None,
        },
        Err(e) => return usage_error(&e.to_string()),
    };
    if cfg.json {
        Report::new("ortho", vec![outcome]).print();
        return ExitCode::SUCCESS;
    }
    match &outcome.certificate {
        Some(c) => {
            println!("orthogonal twist certificate:");
            println!(
                "  delta = [{}, {}, {}] (totally positive)",
                c.delta[0], c.delta[1], c.delta[2]
            );
            println!("  N(delta) = {}", c.delta_norm);
            println!("  unimodular Gram Tr(delta^-1 w_i w_j):");
            for r in &c.unimodular_gram {
                println!("    [{}, {}, {}]", r[0], r[1], r[2]);
            }
            println!(
                "  orthonormal frame (coefficients): {:?}",
                c.orthonormal_frame
            );
        }
        None => println!(
            "unverified: no totally positive generator of the different ideal found in the \
             search pool (this does not decide principality)"
        ),
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct VerifyItemJson {
    n: i64,
    case: String,
    is_good: bool,
    gram_matches_published: Option<bool>,
    twisted_gram: Option<GramJson>,
}

#[derive(Serialize)]
struct VerifySummaryJson {
    family: String,
    n_from: i64,
    n_to: i64,
    checked: usize,
    failures: usize,
    skipped_invalid: usize,
    skipped_gate: usize,
    items: Vec<VerifyItemJson>,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let parts: Vec<&str> = s.split("..").collect();
    if parts.len() != 2 {
        return Err(format!("range '{s}' must look like a..b"));
    }
    let a = parts[0]
        .parse::<i64>()
        .map_err(|e| format!("range start: {e}"))?;
    let b = parts[1]
        .parse::<i64>()
        .map_err(|e| format!("range end: {e}"))?;
    if a > b {
        return Err("range start exceeds end".into());
    }
    Ok((a, b))
}

fn cmd_verify_family(a: &VerifyFamilyCmd, cfg: RunConfig) -> ExitCode {
    let fam = match parse_family(&a.family) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let (lo, hi) = match parse_range(&a.n_range) {
        Ok(r) => r,
        Err(e) => return usage_error(&e),
    };
    let only_case = match &a.case {
        Some(c) => match resolve_case(Some(fam), c) {
            Some(c) => Some(c),
            None => return usage_error(&format!("unknown case '{c}'")),
        },
        None => None,
    };
    let mut items = Vec::new();
    let mut failures = 0usize;
    let mut skipped_invalid = 0usize;
    let mut skipped_gate = 0usize;
    for n in lo..=hi {
        let inst = match make_family_field(fam, n) {
            Ok(i) => i,
            Err(_) => {
                skipped_invalid += 1;
                continue;
            }
        };
        if inst.basis_case == BasisCase::Unknown {
            skipped_gate += 1;
            continue;
        }
        let cases = match only_case {
            Some(c) => family_good_basis(&inst, c)
                .map(|_| vec![c])
                .unwrap_or_default(),
            None => admissible_cases(&inst),
        };
        for case in cases {
            match run_good_case(&inst, case) {
                Ok(j) => {
                    let ok = j.report.is_good && j.matches_expected != Some(false);
                    if !ok {
                        failures += 1;
                    }
                    if !cfg.json {
                        let gram_note = match j.matches_expected {
                            Some(true) => ", Gram = published polynomials",
                            Some(false) => ", GRAM MISMATCH",
                            None => "",
                        };
                        println!(
                            "{} n={n} case {}: good={}{}",
                            a.family, j.case, j.report.is_good, gram_note
                        );
                    }
                    items.push(VerifyItemJson {
                        n,
                        case: j.case,
                        is_good: j.report.is_good,
                        gram_matches_published: j.matches_expected,
                        twisted_gram: j.report.twisted_gram,
                    });
                }
                Err(e) => return usage_error(&e),
            }
        }
    }
    let checked = items.len();
    let summary = VerifySummaryJson {
        family: a.family.clone(),
        n_from: lo,
        n_to: hi,
        checked,
        failures,
        skipped_invalid,
        skipped_gate,
        items,
    };
    if cfg.json {
        Report::new("verify-family", vec![summary]).print();
    } else {
        println!(
            "verify-family {}: checked {} published bases in {}..{}, failures {}, \
             skipped {} invalid n and {} gated n",
            a.family, checked, lo, hi, failures, skipped_invalid, skipped_gate
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
