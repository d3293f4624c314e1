//! JSON report shapes. Every exact quantity is serialized as a canonical
//! rational string (`"p/q"`, or the bare integer when the denominator is
//! one) — floats never appear. Field order is declaration order, and all
//! collections are sorted by their producers, so byte-identical output
//! under identical inputs comes for free.

use serde::Serialize;

use wrcubic_core::lattice::GramMatrix3;
use wrcubic_core::ramified::{IdealBasis, IdealConstruction};
use wrcubic_core::twist::{OrthoTwistCertificate, TwistReport};
use wrcubic_core::{CubicField, FieldElement};

pub const SCHEMA_VERSION: &str = "1";

pub fn rat_str(r: &wrcubic_core::Rat) -> String {
    r.to_string()
}

pub fn elem_strs(e: &FieldElement) -> [String; 3] {
    let c = e.coords();
    [c[0].to_string(), c[1].to_string(), c[2].to_string()]
}

#[derive(Serialize)]
pub struct GramJson {
    pub s11: String,
    pub s22: String,
    pub s33: String,
    pub u: String,
    pub v: String,
    pub w: String,
}

impl GramJson {
    pub fn from(g: &GramMatrix3) -> Self {
        GramJson {
            s11: g.s11.to_string(),
            s22: g.s22.to_string(),
            s33: g.s33.to_string(),
            u: g.u.to_string(),
            v: g.v.to_string(),
            w: g.w.to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct FieldJson {
    pub min_poly: String,
    pub conductor_m: Option<u64>,
    pub conductor_a: Option<i64>,
    pub conductor_b: Option<u64>,
    pub discriminant: String,
    pub maximal_order_known: bool,
    pub galois_matrix: [[String; 3]; 3],
    pub integral_basis: [[String; 3]; 3],
    pub t_invariant: String,
    pub roots: [[String; 2]; 3],
}

pub fn field_json(field: &std::sync::Arc<CubicField>, precision_bits: u32) -> FieldJson {
    let p = field.min_poly();
    let g = field.galois_matrix();
    let ib = field.integral_basis_rows();
    let rho = field.rho();
    let emb = rho.embed(precision_bits);
    FieldJson {
        min_poly: format!("x^3 + ({})x^2 + ({})x + ({})", p.c2, p.c1, p.c0),
        conductor_m: field.conductor().map(|c| c.m),
        conductor_a: field.conductor().map(|c| c.a),
        conductor_b: field.conductor().map(|c| c.b),
        discriminant: field.discriminant().to_string(),
        maximal_order_known: field.maximal_order_known(),
        galois_matrix: std::array::from_fn(|i| std::array::from_fn(|j| g[i][j].to_string())),
        integral_basis: std::array::from_fn(|i| std::array::from_fn(|j| ib[i][j].to_string())),
        t_invariant: field.t_invariant().to_string(),
        roots: std::array::from_fn(|i| [emb[i].lo.to_string(), emb[i].hi.to_string()]),
    }
}

#[derive(Serialize)]
pub struct LinkJson {
    pub psi: [String; 3],
    pub k: String,
    pub verified: bool,
}

#[derive(Serialize)]
pub struct TwistReportJson {
    pub basis: [[String; 3]; 3],
    pub alpha0: [String; 3],
    pub e1: String,
    pub e2: String,
    pub e3: String,
    pub sign_ok: bool,
    pub twisted_gram: Option<GramJson>,
    pub is_good: bool,
    pub principal_link: Option<LinkJson>,
}

pub fn twist_json(r: &TwistReport) -> TwistReportJson {
    TwistReportJson {
        basis: [
            elem_strs(&r.basis[0]),
            elem_strs(&r.basis[1]),
            elem_strs(&r.basis[2]),
        ],
        alpha0: elem_strs(&r.alpha0),
        e1: r.e1.to_string(),
        e2: r.e2.to_string(),
        e3: r.e3.to_string(),
        sign_ok: r.sign_ok,
        twisted_gram: r.twisted_gram.as_ref().map(GramJson::from),
        is_good: r.is_good,
        principal_link: r.principal_link.as_ref().map(|l| LinkJson {
            psi: elem_strs(&l.psi),
            k: l.k.to_string(),
            verified: l.verified,
        }),
    }
}

#[derive(Serialize)]
pub struct IdealJson {
    pub shape: String,
    pub claimed_norm: String,
    pub construction: String,
    pub elements: Option<[[String; 3]; 3]>,
    pub covolume_verified: Option<bool>,
    pub gram: Option<GramJson>,
    pub wr_formula: bool,
    pub reason: String,
    pub wr_enumeration: Option<bool>,
    pub first_minimum: Option<String>,
}

pub fn construction_str(c: IdealConstruction) -> &'static str {
    match c {
        IdealConstruction::KappaOrbit => "kappa_orbit",
        IdealConstruction::ThreeMidMShapeI => "three_mid_m_shape_i",
        IdealConstruction::ThreeMidMShapeIi => "three_mid_m_shape_ii",
        IdealConstruction::ThreeMidMShapeIii => "three_mid_m_shape_iii",
        IdealConstruction::IntegralBasis => "integral_basis",
        IdealConstruction::Twisted => "twisted",
    }
}

pub fn ideal_elements_json(b: &IdealBasis) -> [[String; 3]; 3] {
    [
        elem_strs(&b.elements[0]),
        elem_strs(&b.elements[1]),
        elem_strs(&b.elements[2]),
    ]
}

#[derive(Serialize)]
pub struct OrthoJson {
    pub delta: [String; 3],
    pub delta_norm: String,
    pub unimodular_gram: [[String; 3]; 3],
    pub orthonormal_frame: [[i64; 3]; 3],
}

pub fn ortho_json(c: &OrthoTwistCertificate) -> OrthoJson {
    OrthoJson {
        delta: elem_strs(&c.delta),
        delta_norm: c.delta.norm().to_string(),
        unimodular_gram: std::array::from_fn(|i| {
            std::array::from_fn(|j| c.unimodular_gram[i][j].to_string())
        }),
        orthonormal_frame: c.orthonormal_frame,
    }
}

#[derive(Serialize)]
pub struct Report<T: Serialize> {
    pub schema_version: &'static str,
    pub command: String,
    pub items: Vec<T>,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, items: Vec<T>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            items,
        }
    }

    pub fn print(&self) {
        println!(
            "{}",
            serde_json::to_string_pretty(self).expect("serialization")
        );
    }
}
