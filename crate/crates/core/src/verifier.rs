//! Audit of covering data: the action condition and the frame identity.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::StarAlgebra;
use crate::groups::{conditional_expectation, Elem, GroupAction, WITNESS_THRESHOLD};
use crate::{Error, Result};

/// Default tolerance for grid-sampled carriers.
pub const GRID_TOLERANCE: f64 = 1e-8;
/// Default tolerance for carriers with exact coefficient arithmetic.
pub const COEFFICIENT_TOLERANCE: f64 = 1e-10;

/// A group action on a cover carrier together with its base carrier.
///
/// `embed` is the inclusion of the base; `retract` is a left inverse of it,
/// used to compare the fixed-point algebra with the image of the base.
pub trait CoverStructure: GroupAction {
    type Base: StarAlgebra;

    fn base(&self) -> &Self::Base;
    fn embed(&self, a: &BaseElem<Self>) -> CoverElem<Self>;
    fn retract(&self, a: &CoverElem<Self>) -> BaseElem<Self>;
}

pub type CoverElem<S> = Elem<S>;
pub type BaseElem<S> = <<S as CoverStructure>::Base as StarAlgebra>::Elem;

/// A cover structure with a frame `{a_i}` and its normalization weight `w`,
/// meant to satisfy `w · sum_i a_i g(a_i*) = δ_g`.
#[derive(Debug, Clone)]
pub struct CoveringData<S: CoverStructure> {
    pub structure: S,
    pub frame: Vec<CoverElem<S>>,
    pub frame_weight: f64,
}

impl<S: CoverStructure> CoveringData<S> {
    pub fn new(structure: S, frame: Vec<CoverElem<S>>, frame_weight: f64) -> Result<Self> {
        if frame.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if !(frame_weight.is_finite() && frame_weight > 0.0) {
            return Err(Error::InvalidParameter("frame weight must be positive and finite".into()));
        }
        if !frame.iter().all(|a| structure.algebra().contains(a)) {
            return Err(Error::CarrierMismatch("frame element"));
        }
        Ok(CoveringData { structure, frame, frame_weight })
    }

    pub fn group_order(&self) -> usize {
        self.structure.group().order()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NondegeneracyWitness {
    pub g: usize,
    /// Index into the probe family of the first probe moved by more than the
    /// witness threshold, or `None` if no probe was moved.
    pub probe: Option<usize>,
    /// Displacement of that probe, or the largest displacement seen when none qualified.
    pub displacement: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionA {
    pub involutive_residual: f64,
    pub nondegeneracy_witnesses: Vec<NondegeneracyWitness>,
    pub invariants_match_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionB {
    pub trivial_g_residual: f64,
    pub max_nontrivial_g_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub a: bool,
    pub b: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum MetaValue {
    Bool(bool),
    Int(i64),
    Real(f64),
    Text(String),
}

impl From<bool> for MetaValue {
    fn from(v: bool) -> Self {
        MetaValue::Bool(v)
    }
}

impl From<i64> for MetaValue {
    fn from(v: i64) -> Self {
        MetaValue::Int(v)
    }
}

impl From<usize> for MetaValue {
    fn from(v: usize) -> Self {
        MetaValue::Int(v as i64)
    }
}

impl From<f64> for MetaValue {
    fn from(v: f64) -> Self {
        MetaValue::Real(v)
    }
}

impl From<&str> for MetaValue {
    fn from(v: &str) -> Self {
        MetaValue::Text(v.to_string())
    }
}

impl From<String> for MetaValue {
    fn from(v: String) -> Self {
        MetaValue::Text(v)
    }
}

pub type Metadata = BTreeMap<String, MetaValue>;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub condition_a: ConditionA,
    pub condition_b: ConditionB,
    pub verdict: Verdict,
    pub metadata: Metadata,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict.a && self.verdict.b
    }

    pub fn note(&mut self, key: &str, value: impl Into<MetaValue>) {
        self.metadata.insert(key.to_string(), value.into());
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionReport {
    pub condition: ConditionA,
    pub pass: bool,
    pub probes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameReport {
    pub condition: ConditionB,
    pub pass: bool,
    /// `‖S_g − δ_g‖` per group element, ascending residue.
    pub per_element: Vec<f64>,
    /// Set when a product fell outside the carrier (a degree overflow, say).
    pub failure: Option<Error>,
}

/// Involutivity, non-degeneracy witnesses and the fixed-point comparison on the probe families.
pub fn verify_action<S: CoverStructure>(cov: &CoveringData<S>, tol: f64) -> ActionReport {
    let s = &cov.structure;
    let alg = s.algebra();
    let base = s.base();
    let group = s.group();
    let probes = alg.probes();

    let mut involutive = 0.0f64;
    for g in group.elements() {
        for a in &probes {
            let lhs = s.apply(g, &alg.adjoint(a));
            let rhs = alg.adjoint(&s.apply(g, a));
            involutive = involutive.max(alg.distance(&lhs, &rhs));
        }
    }

    let mut witnesses = Vec::new();
    for g in group.elements().skip(1) {
        let mut best = 0.0f64;
        let mut found = None;
        for (i, b) in probes.iter().enumerate() {
            let d = alg.distance(&s.apply(g, b), b);
            if d > WITNESS_THRESHOLD {
                found = Some((i, d));
                break;
            }
            best = best.max(d);
        }
        witnesses.push(match found {
            Some((i, d)) => NondegeneracyWitness { g: g.residue(), probe: Some(i), displacement: d },
            None => NondegeneracyWitness { g: g.residue(), probe: None, displacement: best },
        });
    }

    let mut matching = 0.0f64;
    for a in &probes {
        let e = conditional_expectation(a, s).expect("probe lies in the carrier");
        matching = matching.max(alg.distance(&e, &s.embed(&s.retract(a))));
    }
    for b in base.probes() {
        let eb = s.embed(&b);
        matching = matching.max(base.distance(&s.retract(&eb), &b));
        for g in group.elements().skip(1) {
            matching = matching.max(alg.distance(&s.apply(g, &eb), &eb));
        }
    }

    let condition = ConditionA {
        involutive_residual: involutive,
        nondegeneracy_witnesses: witnesses,
        invariants_match_residual: matching,
    };
    let pass = condition.involutive_residual <= tol
        && condition.invariants_match_residual <= tol
        && condition.nondegeneracy_witnesses.iter().all(|w| w.probe.is_some());
    ActionReport { condition, pass, probes: probes.len() }
}

/// `S_g = w · sum_i a_i g(a_i*)` for every `g`, in ascending residue and frame order.
pub fn frame_sums<S: CoverStructure>(cov: &CoveringData<S>) -> Result<Vec<CoverElem<S>>> {
    let s = &cov.structure;
    let alg = s.algebra();
    let weight = Complex64::new(cov.frame_weight, 0.0);
    let stars: Vec<_> = cov.frame.iter().map(|a| alg.adjoint(a)).collect();
    s.group()
        .elements()
        .map(|g| {
            let mut acc = alg.zero();
            for (a, a_star) in cov.frame.iter().zip(&stars) {
                acc = alg.add(&acc, &alg.mul(a, &s.apply(g, a_star))?);
            }
            Ok(alg.scale(weight, &acc))
        })
        .collect()
}

pub fn verify_frame<S: CoverStructure>(cov: &CoveringData<S>, tol: f64) -> FrameReport {
    let alg = cov.structure.algebra();
    match frame_sums(cov) {
        Ok(sums) => {
            let one = alg.one();
            let per_element: Vec<f64> = sums
                .iter()
                .enumerate()
                .map(|(k, s)| if k == 0 { alg.distance(s, &one) } else { alg.norm(s) })
                .collect();
            let condition = ConditionB {
                trivial_g_residual: per_element[0],
                max_nontrivial_g_residual: per_element[1..].iter().copied().fold(0.0, f64::max),
            };
            let pass = condition.trivial_g_residual <= tol && condition.max_nontrivial_g_residual <= tol;
            FrameReport { condition, pass, per_element, failure: None }
        }
        Err(e) => FrameReport {
            condition: ConditionB { trivial_g_residual: f64::INFINITY, max_nontrivial_g_residual: f64::INFINITY },
            pass: false,
            per_element: Vec::new(),
            failure: Some(e),
        },
    }
}

/// Both conditions, with tolerances and carrier sizes recorded in the metadata.
pub fn full_report<S: CoverStructure>(cov: &CoveringData<S>, tol_a: f64, tol_b: f64) -> VerificationReport {
    let action = verify_action(cov, tol_a);
    let frame = verify_frame(cov, tol_b);
    let mut report = VerificationReport {
        condition_a: action.condition,
        condition_b: frame.condition,
        verdict: Verdict { a: action.pass, b: frame.pass },
        metadata: Metadata::new(),
    };
    report.note("tol_a", tol_a);
    report.note("tol_b", tol_b);
    report.note("group_order", cov.group_order());
    report.note("cover_dimension", cov.structure.algebra().dimension());
    report.note("base_dimension", cov.structure.base().dimension());
    report.note("frame_size", cov.frame.len());
    report.note("frame_weight", cov.frame_weight);
    report.note("probe_count", action.probes);
    report.note("witness_threshold", WITNESS_THRESHOLD);
    report.note("witness_convention", "first probe moved beyond the threshold; basis probes precede random ones");
    if let Some(e) = frame.failure {
        report.note("frame_failure", e.to_string());
    }
    report
}
