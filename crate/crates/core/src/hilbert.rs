//! The right Hilbert module over the base induced by a covering.
//!
//! `⟨a, b⟩ = sum_g g(a* b)` is invariant, so it is returned as an element of the
//! cover carrier lying in the image of the base; [`inner_base`] retracts it.

use core::ptr;

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::StarAlgebra;
use crate::verifier::{BaseElem, CoverElem, CoverStructure, CoveringData};
use crate::{Error, Result};

#[derive(Debug)]
pub struct ModuleVector<'c, S: CoverStructure> {
    pub value: CoverElem<S>,
    covering: &'c CoveringData<S>,
}

impl<S: CoverStructure> Clone for ModuleVector<'_, S> {
    fn clone(&self) -> Self {
        ModuleVector { value: self.value.clone(), covering: self.covering }
    }
}

impl<'c, S: CoverStructure> ModuleVector<'c, S> {
    pub fn new(value: CoverElem<S>, covering: &'c CoveringData<S>) -> Result<Self> {
        if !covering.structure.algebra().contains(&value) {
            return Err(Error::CarrierMismatch("module vector"));
        }
        Ok(ModuleVector { value, covering })
    }

    pub fn covering(&self) -> &'c CoveringData<S> {
        self.covering
    }

    fn same_covering(&self, other: &Self) -> Result<()> {
        if ptr::eq(self.covering, other.covering) {
            Ok(())
        } else {
            Err(Error::CoveringMismatch)
        }
    }

    /// The frame of the covering as module vectors.
    pub fn frame_of(covering: &'c CoveringData<S>) -> Vec<Self> {
        covering.frame.iter().map(|a| ModuleVector { value: a.clone(), covering }).collect()
    }

    /// Right action of a base element: `a · embed(c)`.
    pub fn right_mul(&self, c: &BaseElem<S>) -> Result<Self> {
        let s = &self.covering.structure;
        if !s.base().contains(c) {
            return Err(Error::CarrierMismatch("base scalar of the right action"));
        }
        let value = s.algebra().mul(&self.value, &s.embed(c))?;
        Ok(ModuleVector { value, covering: self.covering })
    }
}

/// `⟨a, b⟩ = sum_g g(a* b)`, as an invariant element of the cover carrier.
pub fn inner<S: CoverStructure>(a: &ModuleVector<'_, S>, b: &ModuleVector<'_, S>) -> Result<CoverElem<S>> {
    a.same_covering(b)?;
    let s = &a.covering.structure;
    let alg = s.algebra();
    let prod = alg.mul(&alg.adjoint(&a.value), &b.value)?;
    Ok(s.orbit_sum(&prod))
}

/// `⟨a, b⟩` retracted to the base carrier.
pub fn inner_base<S: CoverStructure>(a: &ModuleVector<'_, S>, b: &ModuleVector<'_, S>) -> Result<BaseElem<S>> {
    Ok(a.covering.structure.retract(&inner(a, b)?))
}

/// The rank-one operator `η ↦ ξ ⟨ζ, η⟩`.
#[derive(Debug, Clone)]
pub struct RankOneOperator<'c, S: CoverStructure> {
    pub xi: ModuleVector<'c, S>,
    pub zeta: ModuleVector<'c, S>,
}

impl<'c, S: CoverStructure> RankOneOperator<'c, S> {
    pub fn new(xi: ModuleVector<'c, S>, zeta: ModuleVector<'c, S>) -> Result<Self> {
        xi.same_covering(&zeta)?;
        Ok(RankOneOperator { xi, zeta })
    }
}

pub fn rank_one_apply<'c, S: CoverStructure>(
    op: &RankOneOperator<'c, S>,
    eta: &ModuleVector<'c, S>,
) -> Result<ModuleVector<'c, S>> {
    op.xi.same_covering(eta)?;
    let alg = op.xi.covering.structure.algebra();
    let value = alg.mul(&op.xi.value, &inner(&op.zeta, eta)?)?;
    Ok(ModuleVector { value, covering: op.xi.covering })
}

/// `w · sum_i f_i ⟨f_i, a⟩`, summed in frame order.
pub fn frame_reconstruct<'c, S: CoverStructure>(
    a: &ModuleVector<'c, S>,
    frame: &[ModuleVector<'c, S>],
    weight: f64,
) -> Result<ModuleVector<'c, S>> {
    if frame.is_empty() {
        return Err(Error::EmptyFrame);
    }
    let alg = a.covering.structure.algebra();
    let mut acc = alg.zero();
    for f in frame {
        f.same_covering(a)?;
        acc = alg.add(&acc, &alg.mul(&f.value, &inner(f, a)?)?);
    }
    Ok(ModuleVector { value: alg.scale(Complex64::new(weight, 0.0), &acc), covering: a.covering })
}

/// `‖a − reconstruct(a)‖` for the covering's own frame and weight.
pub fn reconstruction_residual<S: CoverStructure>(cov: &CoveringData<S>, a: &CoverElem<S>) -> Result<f64> {
    let v = ModuleVector::new(a.clone(), cov)?;
    let frame = ModuleVector::frame_of(cov);
    let out = frame_reconstruct(&v, &frame, cov.frame_weight)?;
    Ok(cov.structure.algebra().distance(&out.value, a))
}
