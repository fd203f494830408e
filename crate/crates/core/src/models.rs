//! Built-in benchmark systems: a Michaelis-Menten enzyme, the Hill transcription
//! module and a circadian clock, each in a packed (compound rate laws) and an
//! unpacked (elementary mass action) variant.
//!
//! Every constructor first builds a [`ModelDocument`] and then runs its
//! directives, so `model_document(..)` rendered with
//! [`serialize_model`](crate::dsl::serialize_model) is exactly the text of the
//! bundled `.rxn` files.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::{
    apply_directives, Arg, Directive, DslError, Expr, LawSpec, ModelDocument, ParamDecl, ReactionStmt, SpeciesDecl,
};
use crate::network::{ReactionNetwork, Term};
use crate::templates::TemplateError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("unknown parameter set {0}; sets 0 to 8 exist")]
    UnknownSet(u32),
    #[error("set 0 is the deterministic reference and has no elementary rate constants")]
    NoElementaryRates,
    #[error("invalid model parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Dsl(#[from] DslError),
}

fn build(doc: &ModelDocument) -> Result<ReactionNetwork, ModelError> {
    apply_directives(doc).map_err(|e| match e {
        DslError::Template(t) => ModelError::Template(t),
        other => ModelError::Dsl(other),
    })
}

fn species(name: &str, initial: u64) -> SpeciesDecl {
    SpeciesDecl { name: name.to_string(), initial }
}

fn reaction(id: &str, reactants: Vec<Term>, products: Vec<Term>, law: LawSpec) -> ReactionStmt {
    ReactionStmt { id: id.to_string(), reactants, products, law }
}

fn num(v: f64) -> Arg {
    Arg::number(v)
}

fn param(name: &str) -> Arg {
    Arg::Param(name.to_string())
}

fn check_non_negative(fields: &[(&str, f64)]) -> Result<(), ModelError> {
    match fields.iter().find(|(_, v)| !(*v >= 0.0) || !v.is_finite()) {
        Some((name, v)) => Err(ModelError::Invalid(format!("{name} = {v} must be finite and non-negative"))),
        None => Ok(()),
    }
}

// Michaelis-Menten enzyme

/// Enzyme kinetics in molecule counts and minutes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MmParams {
    pub vmax: f64,
    pub km: f64,
    pub etot: u64,
    pub s0: u64,
    /// `k1·Km/k3`; only used by the unpacked variant.
    pub rho: f64,
}

impl Default for MmParams {
    fn default() -> Self {
        Self { vmax: 60.0, km: 300.0, etot: 60, s0: 599, rho: 100.0 }
    }
}

impl MmParams {
    pub fn with_s0(mut self, s0: u64) -> Self {
        self.s0 = s0;
        self
    }
}

/// `S → P` under `mm(vmax, Km)`, plus an unpack directive when `packed` is false.
pub fn mm_document(p: &MmParams, packed: bool) -> ModelDocument {
    let mut doc = ModelDocument::new(if packed { "mm_packed" } else { "mm_unpacked" });
    doc.species = vec![species("S", p.s0), species("P", 0)];
    doc.reactions = vec![reaction(
        "r1",
        vec![Term::one("S")],
        vec![Term::one("P")],
        LawSpec::MichaelisMenten { vmax: num(p.vmax), km: num(p.km) },
    )];
    if !packed {
        doc.directives.push(Directive::UnpackMm {
            reaction: "r1".into(),
            etot: num(p.etot as f64),
            rho: num(p.rho),
            enzyme: None,
        });
    }
    doc
}

pub fn build_mm_model(p: &MmParams, packed: bool) -> Result<ReactionNetwork, ModelError> {
    for (name, v) in [("vmax", p.vmax), ("Km", p.km)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(ModelError::Invalid(format!("{name} = {v} must be positive")));
        }
    }
    build(&mm_document(p, packed))
}

/// Enzyme-excess pair at substrate level `s0`: the default packed law next to
/// an unpacked scheme with the same elementary constants but ten times the
/// enzyme. With every substrate molecule bound at once the quasi-steady state
/// no longer holds and the elementary scheme runs ahead of the packed law.
pub fn mm_enzyme_excess(s0: u64) -> Result<(ReactionNetwork, ReactionNetwork), ModelError> {
    let base = MmParams::default().with_s0(s0);
    let excess = MmParams { vmax: base.vmax * 10.0, etot: base.etot * 10, ..base.clone() };
    Ok((build_mm_model(&base, true)?, build_mm_model(&excess, false)?))
}

// Hill transcription module

/// Volume factor used by the Hill parameter table.
pub const TABLE_ALPHA: f64 = 0.00167;

/// One row of the sequential-binding parameter table. `k1` and `k3` are
/// multiples of alpha; `k2` and `k4` are plain rates per minute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HillSetRow {
    pub set: u32,
    pub k1_alpha: f64,
    pub k2: f64,
    pub k3_alpha: f64,
    pub k4: f64,
}

impl HillSetRow {
    /// `(k1, k2, k3, k4)` at volume factor `alpha`.
    pub fn rates(&self, alpha: f64) -> [f64; 4] {
        [self.k1_alpha * alpha, self.k2, self.k3_alpha * alpha, self.k4]
    }
}

/// Rate constants as built. Set 6 uses `k2 = 0.01` (see [`HILL_SET6_LISTED_K2`]).
pub const HILL_SETS: [HillSetRow; 8] = [
    HillSetRow { set: 1, k1_alpha: 1.0, k2: 10.0, k3_alpha: 1000.0, k4: 100.0 },
    HillSetRow { set: 2, k1_alpha: 1.0, k2: 100.0, k3_alpha: 1000.0, k4: 10.0 },
    HillSetRow { set: 3, k1_alpha: 10.0, k2: 1000.0, k3_alpha: 100.0, k4: 1.0 },
    HillSetRow { set: 4, k1_alpha: 100.0, k2: 1000.0, k3_alpha: 10.0, k4: 1.0 },
    HillSetRow { set: 5, k1_alpha: 10.0, k2: 1.0, k3_alpha: 100.0, k4: 1000.0 },
    HillSetRow { set: 6, k1_alpha: 1.0, k2: 0.01, k3_alpha: 10.0, k4: 1000.0 },
    HillSetRow { set: 7, k1_alpha: 1000.0, k2: 100.0, k3_alpha: 1.0, k4: 10.0 },
    HillSetRow { set: 8, k1_alpha: 1000.0, k2: 10.0, k3_alpha: 1.0, k4: 100.0 },
];

/// The set-6 `k2` as originally listed. It contradicts that row's own
/// `K1 = 0.01/alpha` and `J = 1/alpha`, so the built set uses 0.01.
pub const HILL_SET6_LISTED_K2: f64 = 1.0;

/// Reference fit results per set (set 0 is the deterministic Hill curve).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceFit {
    pub set: u32,
    pub n_prime: f64,
    pub j_prime: f64,
    pub rmse_estimated: f64,
    pub r: f64,
    pub rmse_theoretical: f64,
}

pub const REFERENCE_FITS: [ReferenceFit; 9] = [
    ReferenceFit { set: 0, n_prime: 2.0, j_prime: 599.0, rmse_estimated: 0.0, r: 9.0, rmse_theoretical: 0.0 },
    ReferenceFit { set: 1, n_prime: 1.67, j_prime: 729.0, rmse_estimated: 0.007511, r: 13.89, rmse_theoretical: 0.066913 },
    ReferenceFit { set: 2, n_prime: 1.95, j_prime: 612.0, rmse_estimated: 0.001737, r: 9.52, rmse_theoretical: 0.008401 },
    ReferenceFit { set: 3, n_prime: 1.95, j_prime: 612.0, rmse_estimated: 0.002859, r: 9.52, rmse_theoretical: 0.600704 },
    ReferenceFit { set: 4, n_prime: 1.68, j_prime: 731.0, rmse_estimated: 0.009201, r: 13.68, rmse_theoretical: 0.709089 },
    ReferenceFit { set: 5, n_prime: 1.05, j_prime: 12418.0, rmse_estimated: 0.002033, r: 65.71, rmse_theoretical: 0.600837 },
    ReferenceFit { set: 6, n_prime: 1.0, j_prime: 124191.0, rmse_estimated: 0.000234, r: 81.0, rmse_theoretical: 0.709229 },
    ReferenceFit { set: 7, n_prime: 1.06, j_prime: 12248.0, rmse_estimated: 0.001434, r: 63.16, rmse_theoretical: 0.600704 },
    ReferenceFit { set: 8, n_prime: 1.03, j_prime: 110937.0, rmse_estimated: 0.000255, r: 71.27, rmse_theoretical: 0.709089 },
];

pub fn hill_set(set: u32) -> Result<HillSetRow, ModelError> {
    HILL_SETS.iter().copied().find(|r| r.set == set).ok_or(if set == 0 {
        ModelError::NoElementaryRates
    } else {
        ModelError::UnknownSet(set)
    })
}

/// Which sequential-binding constants to use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HillSpec {
    /// Row of [`HILL_SETS`], or 0 for the packed-only reference.
    Set(u32),
    /// Explicit `(k1, k2, k3, k4)` in counts and minutes; `J = √(k2·k4/(k1·k3))`.
    Rates([f64; 4]),
}

/// `TF → TF + M` at rate `hill(1, J, 2)`; unpacked variants add the
/// dimerization and promoter-binding steps through an unpack directive.
pub fn hill_document(spec: HillSpec, tf0: u64, packed: bool) -> Result<ModelDocument, ModelError> {
    let name = match spec {
        HillSpec::Set(s) => format!("hill_set{s}_{}", if packed { "packed" } else { "unpacked" }),
        HillSpec::Rates(_) => format!("hill_{}", if packed { "packed" } else { "unpacked" }),
    };
    let mut doc = ModelDocument::new(name);
    doc.species = vec![species("TF", tf0), species("M", 0)];
    let (j, directive) = match spec {
        HillSpec::Set(set) => {
            if set > 8 {
                return Err(ModelError::UnknownSet(set));
            }
            doc.alpha = Some(TABLE_ALPHA);
            let directive = if packed {
                None
            } else {
                let row = hill_set(set)?;
                Some(Directive::UnpackHill {
                    reaction: "tx".into(),
                    k1: Arg::Value(Expr::PerAlpha(row.k2 / row.k1_alpha)),
                    s1: Arg::Value(Expr::TimesAlpha(row.k1_alpha)),
                    s2: Arg::Value(Expr::TimesAlpha(row.k3_alpha)),
                    gene: None,
                    dimer: None,
                    complex: None,
                })
            };
            (Arg::Value(Expr::PerAlpha(1.0)), directive)
        }
        HillSpec::Rates([k1, k2, k3, k4]) => {
            if [k1, k2, k3, k4].iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
                return Err(ModelError::Invalid(format!("rate constants ({k1}, {k2}, {k3}, {k4}) must be positive")));
            }
            let directive = (!packed).then(|| Directive::UnpackHill {
                reaction: "tx".into(),
                k1: num(k2 / k1),
                s1: num(k1),
                s2: num(k3),
                gene: None,
                dimer: None,
                complex: None,
            });
            (num(((k2 * k4) / (k1 * k3)).sqrt()), directive)
        }
    };
    doc.reactions = vec![reaction(
        "tx",
        vec![Term::one("TF")],
        vec![Term::one("TF"), Term::one("M")],
        LawSpec::Hill { kms: num(1.0), j, n: num(2.0) },
    )];
    doc.directives.extend(directive);
    Ok(doc)
}

pub fn build_hill_model(spec: HillSpec, tf0: u64, packed: bool) -> Result<ReactionNetwork, ModelError> {
    build(&hill_document(spec, tf0, packed)?)
}

// Circadian clock

/// Clock parameters in concentration units (µM) and minutes.
///
/// The defaults are a calibrated set, not measured values: they were found by a
/// random search over the packed ODE and rescaled to a 1440-minute period by
/// `scripts/calibrate_clock.py`. Counts follow from `alpha`: amounts, `vmax`,
/// `Km`, `J` and `kms` are divided by it, bimolecular constants multiplied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClockParams {
    /// Maximal transcription rate.
    pub kms: f64,
    pub j: f64,
    /// Translation, per mRNA per minute.
    pub kt: f64,
    /// Dimerization `2CP → CP2`, deterministic flux `kd_f·CP²`.
    pub kd_f: f64,
    pub kd_b: f64,
    /// Sequestration `CP2 + TF → C`.
    pub ki_f: f64,
    pub ki_b: f64,
    pub vmax_m: f64,
    pub km_m: f64,
    pub vmax_cp: f64,
    pub km_cp: f64,
    pub vmax_c: f64,
    pub km_c: f64,
    pub b_m: f64,
    pub b_cp: f64,
    pub b_cp2: f64,
    pub b_c: f64,
    /// Total transcription factor, free plus sequestered.
    pub tf_total: f64,
    pub alpha: f64,
    /// Initial M, CP, CP2, C on the limit cycle (at a trough of total protein).
    pub initial: [f64; 4],
    /// Enzyme totals for the unpacked M, CP and C degradations.
    pub enzymes: [f64; 3],
    /// Stiffness ratio for the three enzymatic expansions.
    pub rho: f64,
    /// `K1/J` for the promoter expansion; `K2 = J/ratio`.
    pub hill_ratio: f64,
    /// Dimer dissociation rate `k2` in the promoter expansion.
    pub hill_k2: f64,
    /// Promoter release rate `k4`.
    pub hill_k4: f64,
}

impl Default for ClockParams {
    fn default() -> Self {
        Self {
            kms: 0.002386,
            j: 0.04407,
            kt: 0.01869,
            kd_f: 0.1114,
            kd_b: 0.0004318,
            ki_f: 0.1474,
            ki_b: 7.576e-6,
            vmax_m: 0.0007611,
            km_m: 0.01269,
            vmax_cp: 0.0008805,
            km_cp: 0.00543,
            vmax_c: 0.001372,
            km_c: 0.00749,
            b_m: 3.247e-5,
            b_cp: 3.247e-5,
            b_cp2: 3.247e-5,
            b_c: 3.247e-5,
            tf_total: 0.1,
            alpha: 0.000167,
            initial: [0.1606, 0.08828, 0.08566, 0.02803],
            enzymes: [0.003986, 0.003528, 0.005851],
            rho: 10.0,
            hill_ratio: 100.0,
            hill_k2: 1.0,
            hill_k4: 20.0,
        }
    }
}

/// Observable total clock protein, monomer units: `CP + 2·CP2 + 2·C`.
pub const CLOCK_PROTEIN_TOTAL: [(&str, f64); 3] = [("CP", 1.0), ("CP2", 2.0), ("C", 2.0)];

impl ClockParams {
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let [m0, cp0, cp20, c0] = self.initial;
        let [em, ecp, ec] = self.enzymes;
        check_non_negative(&[
            ("kms", self.kms),
            ("kt", self.kt),
            ("kd_f", self.kd_f),
            ("kd_b", self.kd_b),
            ("ki_f", self.ki_f),
            ("ki_b", self.ki_b),
            ("vmax_M", self.vmax_m),
            ("vmax_CP", self.vmax_cp),
            ("vmax_C", self.vmax_c),
            ("b_M", self.b_m),
            ("b_CP", self.b_cp),
            ("b_CP2", self.b_cp2),
            ("b_C", self.b_c),
            ("TF total", self.tf_total),
            ("M0", m0),
            ("CP0", cp0),
            ("CP2_0", cp20),
            ("C0", c0),
            ("E_M", em),
            ("E_CP", ecp),
            ("E_C", ec),
        ])?;
        for (name, v) in [
            ("J", self.j),
            ("Km_M", self.km_m),
            ("Km_CP", self.km_cp),
            ("Km_C", self.km_c),
            ("alpha", self.alpha),
            ("hill ratio", self.hill_ratio),
            ("hill k2", self.hill_k2),
            ("hill k4", self.hill_k4),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ModelError::Invalid(format!("{name} = {v} must be positive")));
            }
        }
        if c0 > self.tf_total {
            return Err(ModelError::Invalid(format!("initial complex {c0} exceeds total TF {}", self.tf_total)));
        }
        Ok(())
    }

    /// Concentration to molecule count at this volume.
    pub fn count(&self, conc: f64) -> u64 {
        (conc / self.alpha).round() as u64
    }
}

/// Degradation targets, their enzymes and the species released on degradation.
const CLOCK_DEGRADATIONS: [(&str, &str, &str, &str); 3] =
    [("deg_M", "M", "E_M", "M_deg"), ("deg_CP", "CP", "E_CP", "CP_deg"), ("deg_C", "C", "E_C", "C_deg")];

pub fn clock_document(p: &ClockParams, packed: bool) -> Result<ModelDocument, ModelError> {
    p.validate()?;
    let mut doc = ModelDocument::new(if packed { "clock_packed" } else { "clock_unpacked" });
    doc.alpha = Some(p.alpha);

    let total = p.count(p.tf_total);
    let [m0, cp0, cp20, c0] = p.initial.map(|v| p.count(v));
    let c0 = c0.min(total);
    doc.species = vec![
        species("G", 1),
        species("TF", total - c0),
        species("M", m0),
        species("CP", cp0),
        species("CP2", cp20),
        species("C", c0),
        species("M_deg", 0),
        species("CP_deg", 0),
        species("C_deg", 0),
    ];

    let per_alpha = |v: f64| Expr::PerAlpha(v);
    let plain = |v: f64| Expr::Number(v);
    let params = [
        ("kms", per_alpha(p.kms)),
        ("J", per_alpha(p.j)),
        ("kt", plain(p.kt)),
        // stochastic constant 2·kd_f·alpha: propensity kd_f·alpha·CP·(CP−1)
        ("c_dim", Expr::TimesAlpha(2.0 * p.kd_f)),
        ("kd_b", plain(p.kd_b)),
        ("ki_f", Expr::TimesAlpha(p.ki_f)),
        ("ki_b", plain(p.ki_b)),
        ("vmax_M", per_alpha(p.vmax_m)),
        ("Km_M", per_alpha(p.km_m)),
        ("vmax_CP", per_alpha(p.vmax_cp)),
        ("Km_CP", per_alpha(p.km_cp)),
        ("vmax_C", per_alpha(p.vmax_c)),
        ("Km_C", per_alpha(p.km_c)),
        ("b_M", plain(p.b_m)),
        ("b_CP", plain(p.b_cp)),
        ("b_CP2", plain(p.b_cp2)),
        ("b_C", plain(p.b_c)),
    ];
    doc.params = params.into_iter().map(|(name, value)| ParamDecl { name: name.to_string(), value }).collect();

    let t = Term::one;
    let ma = |k: &str| LawSpec::MassAction(param(k));
    let mm = |v: &str, k: &str| LawSpec::MichaelisMenten { vmax: param(v), km: param(k) };
    doc.reactions = vec![
        reaction("tx", vec![t("TF")], vec![t("TF"), t("M")], LawSpec::Hill { kms: param("kms"), j: param("J"), n: num(2.0) }),
        reaction("tl", vec![t("M")], vec![t("M"), t("CP")], ma("kt")),
        reaction("dim", vec![Term::new("CP", 2)], vec![t("CP2")], ma("c_dim")),
        reaction("undim", vec![t("CP2")], vec![Term::new("CP", 2)], ma("kd_b")),
        reaction("seq", vec![t("CP2"), t("TF")], vec![t("C")], ma("ki_f")),
        reaction("unseq", vec![t("C")], vec![t("CP2"), t("TF")], ma("ki_b")),
        reaction("deg_M", vec![t("M")], vec![t("M_deg")], mm("vmax_M", "Km_M")),
        reaction("deg_CP", vec![t("CP")], vec![t("CP_deg")], mm("vmax_CP", "Km_CP")),
        reaction("deg_C", vec![t("C")], vec![t("TF"), t("C_deg")], mm("vmax_C", "Km_C")),
        reaction("clear_M", vec![t("M_deg")], vec![], LawSpec::Immediate),
        reaction("clear_CP", vec![t("CP_deg")], vec![], LawSpec::Immediate),
        reaction("clear_C", vec![t("C_deg")], vec![], LawSpec::Immediate),
        reaction("bg_M", vec![t("M")], vec![], ma("b_M")),
        reaction("bg_CP", vec![t("CP")], vec![], ma("b_CP")),
        reaction("bg_CP2", vec![t("CP2")], vec![], ma("b_CP2")),
        reaction("bg_C", vec![t("C")], vec![t("TF")], ma("b_C")),
    ];

    let mut tf_terms = vec![t("TF"), t("C")];
    if !packed {
        // K1 = ratio·J and K2 = J/ratio in counts; s1 = k2/K1, s2 = k4/K2
        let k1_conc = p.hill_ratio * p.j;
        let k2_conc = p.j / p.hill_ratio;
        doc.directives.push(Directive::UnpackHill {
            reaction: "tx".into(),
            k1: Arg::Value(Expr::PerAlpha(k1_conc)),
            s1: Arg::Value(Expr::TimesAlpha(p.hill_k2 / k1_conc)),
            s2: Arg::Value(Expr::TimesAlpha(p.hill_k4 / k2_conc)),
            gene: Some("G".into()),
            dimer: None,
            complex: None,
        });
        for ((rid, _, enzyme, _), conc) in CLOCK_DEGRADATIONS.iter().zip(p.enzymes) {
            doc.directives.push(Directive::UnpackMm {
                reaction: rid.to_string(),
                etot: num(p.count(conc).max(1) as f64),
                rho: num(p.rho),
                enzyme: Some(enzyme.to_string()),
            });
        }
        tf_terms = vec![t("TF"), Term::new("TF2", 2), Term::new("GTF2", 2), t("C"), t("E_CC")];
    }
    doc.directives.push(Directive::Conserve { terms: tf_terms, total: num(total as f64) });
    Ok(doc)
}

/// Transcription under Hill kinetics, translation, dimerization, sequestration of
/// TF by the dimer, enzymatic degradation of M, CP and C with immediate removal
/// of the degraded species, and slow background decay of M, CP, CP2 and C.
/// Degrading C frees its TF. The unpacked variant expands the promoter and all
/// three enzymes.
pub fn build_clock_model(p: &ClockParams, packed: bool) -> Result<ReactionNetwork, ModelError> {
    build(&clock_document(p, packed)?)
}

/// Names of the bundled `.rxn` files and the documents they must contain.
pub fn bundled_documents() -> Vec<(&'static str, ModelDocument)> {
    let hill = |packed| hill_document(HillSpec::Set(2), 599, packed).expect("set 2 exists");
    let clock = |packed| clock_document(&ClockParams::default(), packed).expect("defaults are valid");
    vec![
        ("mm_packed.rxn", mm_document(&MmParams::default(), true)),
        ("mm_unpacked.rxn", mm_document(&MmParams::default(), false)),
        ("hill_packed.rxn", hill(true)),
        ("hill_unpacked.rxn", hill(false)),
        ("clock_packed.rxn", clock(true)),
        ("clock_unpacked.rxn", clock(false)),
    ]
}

/// Built-in model by name, as accepted on the command line.
pub fn builtin(name: &str) -> Option<ModelDocument> {
    bundled_documents().into_iter().find(|(file, _)| file.trim_end_matches(".rxn") == name).map(|(_, doc)| doc)
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;
    use crate::network::RateLaw;
    use crate::templates::HillDerivation;

    #[test]
    fn mm_defaults() {
        let packed = build_mm_model(&MmParams::default(), true).unwrap();
        assert_eq!(packed.reactions.len(), 1);
        let unpacked = build_mm_model(&MmParams::default(), false).unwrap();
        assert_eq!(unpacked.reactions.len(), 3);
        assert_eq!(unpacked.conservations[0].to_string(), "E + ES = 60");
        let empty = build_mm_model(&MmParams::default().with_s0(0), false).unwrap();
        assert!(empty.validate().is_clean());
    }

    #[test]
    fn enzyme_excess_keeps_elementary_constants() {
        let (_, excess) = mm_enzyme_excess(60).unwrap();
        let (_, default) = unpack_default();
        let rates = |n: &ReactionNetwork| n.reactions.iter().map(|r| format!("{:?}", r.law)).collect::<Vec<_>>();
        assert_eq!(rates(&excess), rates(&default));
        assert_eq!(excess.species[excess.species_index("E").unwrap()].initial, 600);
    }

    fn unpack_default() -> (ReactionNetwork, ReactionNetwork) {
        let p = MmParams::default().with_s0(60);
        (build_mm_model(&p, true).unwrap(), build_mm_model(&p, false).unwrap())
    }

    fn mass_action_rates(net: &ReactionNetwork) -> Vec<f64> {
        net.reactions
            .iter()
            .filter_map(|r| match r.law {
                RateLaw::MassAction { rate } => Some(rate),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn hill_set_two_unpacked() {
        let net = build_hill_model(HillSpec::Set(2), 599, false).unwrap();
        let k = mass_action_rates(&net);
        let a = TABLE_ALPHA;
        // dimerization carries c = 2·k1
        let expect = [2.0 * a, 100.0, 1000.0 * a, 10.0];
        for (got, want) in k.iter().zip(expect) {
            assert!(((got - want) / want).abs() < 1e-14, "{got} vs {want}");
        }
        assert_eq!(net.reactions.len(), 5);
    }

    #[test]
    fn hill_set_zero_is_packed_only() {
        let net = build_hill_model(HillSpec::Set(0), 599, true).unwrap();
        assert_eq!(net.reactions.len(), 1);
        let RateLaw::Hill { j, n, .. } = net.reactions[0].law else { panic!() };
        assert_eq!(n, 2);
        assert!((j - 599.0).abs() < 1.0);
        assert_eq!(build_hill_model(HillSpec::Set(0), 599, false), Err(ModelError::NoElementaryRates));
        assert_eq!(build_hill_model(HillSpec::Set(9), 599, true), Err(ModelError::UnknownSet(9)));
    }

    #[test]
    fn weak_cooperativity_sets_are_flagged() {
        for row in HILL_SETS {
            let [k1, k2, k3, k4] = row.rates(TABLE_ALPHA);
            let d = HillDerivation::from_rates(k1, k2, k3, k4).unwrap();
            assert_eq!(d.positive_cooperativity, row.set <= 4, "set {}", row.set);
            assert!(build_hill_model(HillSpec::Set(row.set), 100, false).unwrap().validate().is_clean());
        }
    }

    #[test]
    fn explicit_rates_match_set() {
        let a = build_hill_model(HillSpec::Rates(HILL_SETS[2].rates(TABLE_ALPHA)), 300, false).unwrap();
        let b = build_hill_model(HillSpec::Set(3), 300, false).unwrap();
        assert_eq!(a.reactions.len(), b.reactions.len());
        for (x, y) in mass_action_rates(&a).iter().zip(mass_action_rates(&b)) {
            assert!(((x - y) / y).abs() < 1e-12);
        }
    }

    #[test]
    fn clock_species_and_conservations() {
        let p = ClockParams::default();
        let packed = build_clock_model(&p, true).unwrap();
        let unpacked = build_clock_model(&p, false).unwrap();
        for s in ["G", "TF", "M", "CP", "CP2", "C"] {
            assert!(packed.has_species(s) && unpacked.has_species(s), "{s}");
        }
        for s in ["TF2", "GTF2", "E_M", "E_CP", "E_C", "E_MM", "E_CPCP", "E_CC"] {
            assert!(!packed.has_species(s) && unpacked.has_species(s), "{s}");
        }
        assert_eq!(unpacked.conservations.len(), 5);
        assert!(unpacked.reactions.iter().all(|r| matches!(r.law, RateLaw::MassAction { .. } | RateLaw::Immediate)));
        for c in &unpacked.conservations {
            assert!(unpacked.reactions.iter().all(|r| c.preserved_by(r)), "{c}");
        }
        let tf = p.count(p.tf_total);
        assert_eq!(packed.conservations[0].total, tf);
        assert_eq!(tf, 599);
    }

    #[test]
    fn clock_rejects_bad_params() {
        let p = ClockParams { j: 0.0, ..ClockParams::default() };
        assert!(matches!(build_clock_model(&p, true), Err(ModelError::Invalid(_))));
        let p = ClockParams { kt: -1.0, ..ClockParams::default() };
        assert!(matches!(build_clock_model(&p, true), Err(ModelError::Invalid(_))));
        let p = ClockParams { kt: 0.0, ..ClockParams::default() };
        assert!(build_clock_model(&p, true).is_ok());
    }

    /// Signed species influence graph: a reaction whose rate reads `u` and
    /// changes `v` adds the edge `u → v` with the sign of the change.
    fn influence(net: &ReactionNetwork) -> BTreeMap<(String, String), BTreeSet<i8>> {
        let mut edges: BTreeMap<(String, String), BTreeSet<i8>> = BTreeMap::new();
        for r in &net.reactions {
            if matches!(r.law, RateLaw::Immediate) {
                continue;
            }
            let mut readers: BTreeSet<&str> = r.reactants.iter().map(|t| t.species.as_str()).collect();
            readers.extend(r.law.modifier());
            for u in readers {
                for (v, d) in r.net_change() {
                    if d != 0 && u != v {
                        edges.entry((u.to_string(), v)).or_default().insert(d.signum() as i8);
                    }
                }
            }
        }
        edges
    }

    fn cycles_through(edges: &BTreeMap<(String, String), BTreeSet<i8>>, from: &str, to: &str) -> Vec<(Vec<String>, i8)> {
        fn walk(
            edges: &BTreeMap<(String, String), BTreeSet<i8>>,
            path: &mut Vec<String>,
            sign: i8,
            start: &str,
            out: &mut Vec<(Vec<String>, i8)>,
        ) {
            let here = path.last().unwrap().clone();
            for ((u, v), signs) in edges {
                if *u != here {
                    continue;
                }
                for s in signs {
                    if v == start {
                        out.push((path.clone(), sign * s));
                    } else if !path.contains(v) {
                        path.push(v.clone());
                        walk(edges, path, sign * s, start, out);
                        path.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        for s in &edges[&(from.to_string(), to.to_string())] {
            let mut path = vec![from.to_string(), to.to_string()];
            walk(edges, &mut path, *s, from, &mut out);
        }
        out
    }

    #[test]
    fn clock_has_one_negative_transcriptional_loop() {
        let net = build_clock_model(&ClockParams::default(), true).unwrap();
        let cycles = cycles_through(&influence(&net), "TF", "M");
        let negative: Vec<_> = cycles.iter().filter(|(_, s)| *s < 0).collect();
        assert_eq!(negative.len(), 1, "{cycles:?}");
        assert_eq!(negative[0].0, ["TF", "M", "CP", "CP2"]);
    }

    #[test]
    fn bundled_names_resolve() {
        assert!(builtin("clock_unpacked").is_some());
        assert!(builtin("nope").is_none());
        assert_eq!(bundled_documents().len(), 6);
    }
}
