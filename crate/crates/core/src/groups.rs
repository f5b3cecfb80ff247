//! Cyclic groups acting on carriers, and averaging over the action.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::StarAlgebra;
use crate::{Error, Result};

/// Displacement a generator must exceed to count as a non-degeneracy witness.
pub const WITNESS_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CyclicGroup {
    n: usize,
}

impl CyclicGroup {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("group order must be at least 1".into()));
        }
        Ok(CyclicGroup { n })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// The residue class of `k`, for any integer `k`.
    pub fn element(&self, k: i64) -> GroupElement {
        GroupElement { k: k.rem_euclid(self.n as i64) as usize, n: self.n }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { k: 0, n: self.n }
    }

    /// All elements in ascending residue order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.n).map(move |k| GroupElement { k, n: self.n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    k: usize,
    n: usize,
}

impl GroupElement {
    pub fn residue(&self) -> usize {
        self.k
    }

    pub fn group(&self) -> CyclicGroup {
        CyclicGroup { n: self.n }
    }

    pub fn is_identity(&self) -> bool {
        self.k == 0
    }

    pub fn compose(&self, other: GroupElement) -> Result<GroupElement> {
        if other.n != self.n {
            return Err(Error::GroupMismatch { expected: self.n, found: other.n });
        }
        Ok(GroupElement { k: (self.k + other.k) % self.n, n: self.n })
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { k: (self.n - self.k) % self.n, n: self.n }
    }
}

/// A `Z_n` action on a carrier by *-automorphisms.
pub trait GroupAction {
    type Algebra: StarAlgebra;

    fn group(&self) -> CyclicGroup;
    fn algebra(&self) -> &Self::Algebra;

    /// The rule itself; callers are expected to have checked membership.
    fn apply(&self, g: GroupElement, a: &Elem<Self>) -> Elem<Self>;

    /// `sum_g g(a)` in ascending residue order. Carriers with an exact
    /// closed form for the orbit sum override this.
    fn orbit_sum(&self, a: &Elem<Self>) -> Elem<Self> {
        let alg = self.algebra();
        let mut acc = alg.zero();
        for g in self.group().elements() {
            acc = alg.add(&acc, &self.apply(g, a));
        }
        acc
    }

    fn act(&self, g: GroupElement, a: &Elem<Self>) -> Result<Elem<Self>> {
        let group = self.group();
        if g.n != group.order() {
            return Err(Error::GroupMismatch { expected: group.order(), found: g.n });
        }
        if !self.algebra().contains(a) {
            return Err(Error::CarrierMismatch("argument of act"));
        }
        Ok(self.apply(g, a))
    }
}

/// Element type of the carrier an action lives on.
pub type Elem<S> = <<S as GroupAction>::Algebra as StarAlgebra>::Elem;

/// `E(a) = (1/n) sum_g g(a)`.
pub fn conditional_expectation<S: GroupAction + ?Sized>(a: &Elem<S>, action: &S) -> Result<Elem<S>> {
    let alg = action.algebra();
    if !alg.contains(a) {
        return Err(Error::CarrierMismatch("argument of conditional_expectation"));
    }
    let n = action.group().order() as f64;
    Ok(alg.scale(Complex64::new(1.0 / n, 0.0), &action.orbit_sum(a)))
}

/// `max_g ‖g(a) − a‖`.
pub fn invariance_defect<S: GroupAction + ?Sized>(a: &Elem<S>, action: &S) -> Result<f64> {
    let alg = action.algebra();
    if !alg.contains(a) {
        return Err(Error::CarrierMismatch("argument of is_invariant"));
    }
    Ok(action
        .group()
        .elements()
        .skip(1)
        .map(|g| alg.distance(&action.apply(g, a), a))
        .fold(0.0, f64::max))
}

pub fn is_invariant<S: GroupAction + ?Sized>(a: &Elem<S>, action: &S, tol: f64) -> Result<bool> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter("tolerance must be nonnegative".into()));
    }
    Ok(invariance_defect(a, action)? <= tol)
}

/// A probe moved by a group element: evidence that the element acts non-trivially.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    pub g: usize,
    pub probe: usize,
    pub displacement: f64,
}

/// The first probe (basis elements come first) that `g` moves by more than
/// [`WITNESS_THRESHOLD`].
pub fn nondegeneracy_witness<S: GroupAction + ?Sized>(action: &S, g: GroupElement) -> Option<Witness> {
    let alg = action.algebra();
    alg.probes().iter().enumerate().find_map(|(i, b)| {
        let d = alg.distance(&action.apply(g, b), b);
        (d > WITNESS_THRESHOLD).then_some(Witness { g: g.residue(), probe: i, displacement: d })
    })
}

/// Witnesses for every nontrivial element, `None` where the search failed.
pub fn nondegeneracy_witnesses<S: GroupAction + ?Sized>(action: &S) -> Vec<(usize, Option<Witness>)> {
    action.group().elements().skip(1).map(|g| (g.residue(), nondegeneracy_witness(action, g))).collect()
}

/// Every group element acts as the identity.
#[derive(Debug, Clone)]
pub struct TrivialAction<A> {
    pub group: CyclicGroup,
    pub algebra: A,
}

impl<A: StarAlgebra> GroupAction for TrivialAction<A> {
    type Algebra = A;

    fn group(&self) -> CyclicGroup {
        self.group
    }

    fn algebra(&self) -> &A {
        &self.algebra
    }

    fn apply(&self, _g: GroupElement, a: &A::Elem) -> A::Elem {
        a.clone()
    }
}
