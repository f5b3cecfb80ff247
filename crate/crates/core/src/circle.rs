//! Trigonometric polynomials on the circle, the covers `u ↦ v^n`, and the
//! smooth partition-of-unity frame on a sampled n-fold cover.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::Float;

use crate::algebra::StarAlgebra;
use crate::groups::{CyclicGroup, GroupAction, GroupElement};
use crate::sampled::{circle_sampled_cover, SampledCover, SampledFunction};
use crate::util::{cis, rem, root_of_unity};
use crate::verifier::{CoverStructure, CoveringData};
use crate::{Error, Result};

pub const DEFAULT_DEGREE: usize = 64;
pub const DEFAULT_GRID: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Laurent polynomial `sum_{|m| ≤ D} c_m v^m`; `coeffs[m + D] = c_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePoly {
    degree_bound: usize,
    coeffs: Vec<Complex64>,
}

impl CirclePoly {
    pub fn zero(degree_bound: usize) -> Self {
        CirclePoly { degree_bound, coeffs: vec![ZERO; 2 * degree_bound + 1] }
    }

    pub fn one(degree_bound: usize) -> Self {
        Self::monomial(0, degree_bound).expect("degree 0 always fits")
    }

    pub fn monomial(m: i64, degree_bound: usize) -> Result<Self> {
        let mut p = Self::zero(degree_bound);
        p.set(m, ONE)?;
        Ok(p)
    }

    /// Coefficients in index order `-D..=D`.
    pub fn from_coeffs(degree_bound: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * degree_bound + 1 {
            return Err(Error::InvalidParameter(alloc::format!(
                "expected {} coefficients for degree bound {degree_bound}, got {}",
                2 * degree_bound + 1,
                coeffs.len()
            )));
        }
        Ok(CirclePoly { degree_bound, coeffs })
    }

    /// Sparse constructor from `(m, c_m)` pairs.
    pub fn from_terms(degree_bound: usize, terms: &[(i64, Complex64)]) -> Result<Self> {
        let mut p = Self::zero(degree_bound);
        for &(m, c) in terms {
            let cur = p.coeff(m);
            p.set(m, cur + c)?;
        }
        Ok(p)
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c_m`, zero outside the bound.
    pub fn coeff(&self, m: i64) -> Complex64 {
        let d = self.degree_bound as i64;
        if m.abs() > d {
            ZERO
        } else {
            self.coeffs[(m + d) as usize]
        }
    }

    pub fn set(&mut self, m: i64, c: Complex64) -> Result<()> {
        let d = self.degree_bound as i64;
        if m.abs() > d {
            return Err(Error::DegreeOverflow { needed: m.unsigned_abs() as usize, bound: self.degree_bound });
        }
        self.coeffs[(m + d) as usize] = c;
        Ok(())
    }

    /// Nonzero terms `(m, c_m)` in ascending `m`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let d = self.degree_bound as i64;
        self.coeffs.iter().enumerate().filter(|(_, c)| **c != ZERO).map(move |(i, c)| (i as i64 - d, *c))
    }

    /// Lowest and highest nonzero index, `None` for the zero polynomial.
    pub fn support(&self) -> Option<(i64, i64)> {
        let mut t = self.terms();
        let first = t.next()?.0;
        Some((first, t.last().map_or(first, |x| x.0)))
    }

    /// Largest `|m|` with `c_m ≠ 0`.
    pub fn degree(&self) -> usize {
        self.support().map_or(0, |(lo, hi)| lo.unsigned_abs().max(hi.unsigned_abs()) as usize)
    }

    /// Same polynomial under another bound.
    pub fn with_bound(&self, degree_bound: usize) -> Result<Self> {
        let needed = self.degree();
        if needed > degree_bound {
            return Err(Error::DegreeOverflow { needed, bound: degree_bound });
        }
        let mut out = Self::zero(degree_bound);
        for (m, c) in self.terms() {
            out.set(m, c)?;
        }
        Ok(out)
    }

    fn bound_of(&self, other: &Self) -> usize {
        self.degree_bound.max(other.degree_bound)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.bound_of(other));
        for (m, c) in self.terms().chain(other.terms()) {
            let cur = out.coeff(m);
            out.set(m, cur + c).expect("within the larger bound");
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CirclePoly { degree_bound: self.degree_bound, coeffs: self.coeffs.iter().map(|c| s * c).collect() }
    }

    /// Exact product under the larger of the two bounds.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.multiply_into(other, self.bound_of(other))
    }

    /// Exact product under `out_bound`; fails if any product term falls outside.
    pub fn multiply_into(&self, other: &Self, out_bound: usize) -> Result<Self> {
        if let (Some((alo, ahi)), Some((blo, bhi))) = (self.support(), other.support()) {
            let needed = (alo + blo).unsigned_abs().max((ahi + bhi).unsigned_abs()) as usize;
            if needed > out_bound {
                return Err(Error::DegreeOverflow { needed, bound: out_bound });
            }
        }
        Ok(self.convolve(other, out_bound))
    }

    /// Product with every term beyond `out_bound` dropped.
    pub fn multiply_truncated(&self, other: &Self, out_bound: usize) -> Self {
        self.convolve(other, out_bound)
    }

    fn convolve(&self, other: &Self, out_bound: usize) -> Self {
        let d = out_bound as i64;
        let mut out = Self::zero(out_bound);
        let rhs: Vec<_> = other.terms().collect();
        for (m, a) in self.terms() {
            for &(k, b) in &rhs {
                let idx = m + k;
                if idx.abs() <= d {
                    out.coeffs[(idx + d) as usize] += a * b;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.degree_bound);
        for (m, c) in self.terms() {
            out.set(-m, c.conj()).expect("bound is symmetric");
        }
        out
    }

    /// Value at `e^{iφ}`, by Horner's rule in `z = e^{iφ}`.
    pub fn eval(&self, phi: f64) -> Complex64 {
        let z = cis(phi);
        let mut acc = ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        let d = self.degree_bound as f64;
        acc * cis(-d * phi)
    }

    /// Samples on the uniform grid `φ_i = 2πi/grid`.
    pub fn sample(&self, grid: usize) -> Vec<Complex64> {
        (0..grid).map(|i| self.eval(TAU * i as f64 / grid as f64)).collect()
    }

    /// Max of `|a(e^{iφ})|` on a uniform grid of at least `4D + 1` points.
    pub fn sup_norm(&self, grid: usize) -> Result<f64> {
        let required = 4 * self.degree_bound + 1;
        if grid < required {
            return Err(Error::GridTooCoarse { grid, required });
        }
        Ok(self.sample(grid).iter().map(|c| c.norm()).fold(0.0, f64::max))
    }

    /// `c_m ↦ e^{ims} c_m`: the function rotated by `s` radians, `a(φ + s)`.
    pub fn rotate(&self, s: f64) -> Self {
        let mut out = self.clone();
        for (m, c) in self.terms() {
            out.set(m, c * cis(m as f64 * s)).expect("same bound");
        }
        out
    }

    /// Multiplication by `v^j` under the same bound.
    pub fn shift(&self, j: i64) -> Result<Self> {
        let mut out = Self::zero(self.degree_bound);
        for (m, c) in self.terms() {
            out.set(m + j, c)?;
        }
        Ok(out)
    }

    /// Pullback along `u ↦ v^n`: `c_m` moves to index `nm` under `out_bound`.
    pub fn embed_base(&self, n: usize, out_bound: usize) -> Result<Self> {
        let mut out = Self::zero(out_bound);
        for (m, c) in self.terms() {
            out.set(m * n as i64, c).map_err(|_| Error::DegreeOverflow {
                needed: self.degree() * n,
                bound: out_bound,
            })?;
        }
        Ok(out)
    }

    /// Left inverse of [`CirclePoly::embed_base`]: keeps `c_{nm}` as the `m`-th
    /// coefficient and discards every index not divisible by `n`.
    pub fn sieve(&self, n: usize, out_bound: usize) -> Result<Self> {
        let mut out = Self::zero(out_bound);
        for (m, c) in self.terms() {
            if m % n as i64 == 0 {
                out.set(m / n as i64, c)?;
            }
        }
        Ok(out)
    }

    /// Largest coefficient modulus of `self − other`.
    pub fn max_coeff_distance(&self, other: &Self) -> f64 {
        let d = self.bound_of(other) as i64;
        (-d..=d).map(|m| (self.coeff(m) - other.coeff(m)).norm()).fold(0.0, f64::max)
    }
}

/// Trigonometric polynomials of degree at most `degree_bound`, normed by the
/// sup over a grid of `8(D + 1)` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleAlgebra {
    pub degree_bound: usize,
}

impl CircleAlgebra {
    pub fn new(degree_bound: usize) -> Self {
        CircleAlgebra { degree_bound }
    }

    pub fn norm_grid(&self) -> usize {
        8 * (self.degree_bound + 1)
    }
}

impl StarAlgebra for CircleAlgebra {
    type Elem = CirclePoly;

    fn dimension(&self) -> usize {
        2 * self.degree_bound + 1
    }

    fn contains(&self, a: &CirclePoly) -> bool {
        a.degree_bound == self.degree_bound
    }

    fn zero(&self) -> CirclePoly {
        CirclePoly::zero(self.degree_bound)
    }

    fn one(&self) -> CirclePoly {
        CirclePoly::one(self.degree_bound)
    }

    fn add(&self, a: &CirclePoly, b: &CirclePoly) -> CirclePoly {
        a.add(b)
    }

    fn scale(&self, c: Complex64, a: &CirclePoly) -> CirclePoly {
        a.scale(c)
    }

    fn mul(&self, a: &CirclePoly, b: &CirclePoly) -> Result<CirclePoly> {
        a.multiply_into(b, self.degree_bound)
    }

    fn adjoint(&self, a: &CirclePoly) -> CirclePoly {
        a.adjoint()
    }

    fn norm(&self, a: &CirclePoly) -> f64 {
        a.sample(self.norm_grid()).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn basis(&self) -> Vec<CirclePoly> {
        let d = self.degree_bound as i64;
        (-d..=d).map(|m| CirclePoly::monomial(m, self.degree_bound).expect("in range")).collect()
    }

    fn coords(&self, a: &CirclePoly) -> Vec<Complex64> {
        a.coeffs.clone()
    }

    fn from_coords(&self, coords: &[Complex64]) -> CirclePoly {
        CirclePoly { degree_bound: self.degree_bound, coeffs: coords.to_vec() }
    }
}

/// The deck action `k̄ v = e^{2πik/n} v` on polynomials in `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleDeckAction {
    group: CyclicGroup,
    algebra: CircleAlgebra,
}

impl CircleDeckAction {
    pub fn new(n: usize, degree_bound: usize) -> Result<Self> {
        Ok(CircleDeckAction { group: CyclicGroup::new(n)?, algebra: CircleAlgebra::new(degree_bound) })
    }
}

fn deck_apply(n: usize, g: GroupElement, a: &CirclePoly) -> CirclePoly {
    let mut out = a.clone();
    for (m, c) in a.terms() {
        out.set(m, c * root_of_unity(g.residue() as i64 * m, n)).expect("same bound");
    }
    out
}

/// The orbit sum in closed form: `sum_k e^{2πikm/n} = n [n | m]`.
fn deck_orbit_sum(n: usize, a: &CirclePoly) -> CirclePoly {
    let mut out = CirclePoly::zero(a.degree_bound);
    for (m, c) in a.terms() {
        if m % n as i64 == 0 {
            out.set(m, c * n as f64).expect("same bound");
        }
    }
    out
}

impl GroupAction for CircleDeckAction {
    type Algebra = CircleAlgebra;

    fn group(&self) -> CyclicGroup {
        self.group
    }

    fn algebra(&self) -> &CircleAlgebra {
        &self.algebra
    }

    fn apply(&self, g: GroupElement, a: &CirclePoly) -> CirclePoly {
        deck_apply(self.group.order(), g, a)
    }

    fn orbit_sum(&self, a: &CirclePoly) -> CirclePoly {
        deck_orbit_sum(self.group.order(), a)
    }
}

/// `deck_action(n)` on polynomials of the default degree bound.
pub fn deck_action(n: usize) -> Result<CircleDeckAction> {
    CircleDeckAction::new(n, DEFAULT_DEGREE)
}

/// `C(S¹_u) ⊂ C(S¹_v)` via `u = v^n`, truncated at `cover_degree` in `v` and
/// `⌊cover_degree / n⌋` in `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleCover {
    deck: CircleDeckAction,
    base: CircleAlgebra,
}

impl CircleCover {
    pub fn new(n: usize, cover_degree: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("cover degree n must be at least 1".into()));
        }
        Ok(CircleCover { deck: CircleDeckAction::new(n, cover_degree)?, base: CircleAlgebra::new(cover_degree / n) })
    }

    pub fn n(&self) -> usize {
        self.deck.group.order()
    }

    pub fn cover_degree(&self) -> usize {
        self.deck.algebra.degree_bound
    }

    pub fn base_degree(&self) -> usize {
        self.base.degree_bound
    }

    pub fn deck(&self) -> &CircleDeckAction {
        &self.deck
    }

    /// The frame `{v^j}_{0 ≤ j < n}` with weight `1/n`.
    pub fn monomial_covering(self) -> Result<CoveringData<CircleCover>> {
        let n = self.n();
        if n > self.cover_degree() + 1 {
            return Err(Error::DegreeOverflow { needed: n - 1, bound: self.cover_degree() });
        }
        let frame = (0..n as i64).map(|j| CirclePoly::monomial(j, self.cover_degree())).collect::<Result<_>>()?;
        CoveringData::new(self, frame, 1.0 / n as f64)
    }
}

impl GroupAction for CircleCover {
    type Algebra = CircleAlgebra;

    fn group(&self) -> CyclicGroup {
        self.deck.group
    }

    fn algebra(&self) -> &CircleAlgebra {
        &self.deck.algebra
    }

    fn apply(&self, g: GroupElement, a: &CirclePoly) -> CirclePoly {
        self.deck.apply(g, a)
    }

    fn orbit_sum(&self, a: &CirclePoly) -> CirclePoly {
        self.deck.orbit_sum(a)
    }
}

impl CoverStructure for CircleCover {
    type Base = CircleAlgebra;

    fn base(&self) -> &CircleAlgebra {
        &self.base
    }

    fn embed(&self, a: &CirclePoly) -> CirclePoly {
        a.embed_base(self.n(), self.cover_degree()).expect("base bound times n fits the cover bound")
    }

    fn retract(&self, a: &CirclePoly) -> CirclePoly {
        a.sieve(self.n(), self.base_degree()).expect("sieved indices fit the base bound")
    }
}

/// Left and right ends of the two arcs covering the base circle.
pub const ARCS: [(f64, f64); 2] = [(-PI - 0.5, 0.5), (-0.5, PI + 0.5)];
/// Width of the smooth transition at each arc end.
pub const TRANSITION: f64 = 0.5;

fn flat(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        Float::exp(-1.0 / t)
    }
}

/// Smooth step: 0 for `t ≤ 0`, 1 for `t ≥ 1`, built from `exp(-1/t)`.
pub fn smoothstep(t: f64) -> f64 {
    let a = flat(t);
    let b = flat(1.0 - t);
    a / (a + b)
}

/// Representative of `phi` in `[l, l + period)`.
fn representative(phi: f64, l: f64, period: f64) -> f64 {
    l + rem(phi - l, period)
}

/// Unnormalized bump on arc `j`, evaluated at the base angle `phi`.
pub fn bump(j: usize, phi: f64) -> f64 {
    let (l, r) = ARCS[j];
    let x = representative(phi, l, TAU);
    if x >= r {
        return 0.0;
    }
    smoothstep((x - l) / TRANSITION) * smoothstep((r - x) / TRANSITION)
}

/// `(a_1, a_2)` at `phi`: the bumps normalized so that `a_1 + a_2 = 1`.
pub fn partition_of_unity(phi: f64) -> [f64; 2] {
    let b = [bump(0, phi), bump(1, phi)];
    let s = b[0] + b[1];
    [b[0] / s, b[1] / s]
}

/// The frame `{e_ι}`, `ι = (g, j)`, on the sampled n-fold circle cover.
///
/// Elements are ordered by `g` then `j`. Base point `i` sits at `2πi/N`;
/// cover point `t` at the lifted coordinate `2πt/N ∈ [0, 2πn)`.
#[derive(Debug, Clone)]
pub struct PartitionFrame {
    pub n: usize,
    pub base_points: usize,
    pub group: CyclicGroup,
    pub cover: SampledCover,
    /// `e_1, e_2` on the base grid.
    pub base_frame: [SampledFunction; 2],
    pub index: Vec<(usize, usize)>,
    pub elements: Vec<SampledFunction>,
}

impl PartitionFrame {
    /// The cover with `n = 1` is the identity map; the frame is then `{e_1, e_2}` itself.
    pub fn is_degenerate(&self) -> bool {
        self.n == 1
    }

    pub fn covering(&self) -> CoveringData<SampledCover> {
        CoveringData::new(self.cover.clone(), self.elements.clone(), 1.0).expect("frame is nonempty and in the carrier")
    }
}

/// Minimum base grid per sheet for [`build_partition`].
pub const MIN_GRID_PER_SHEET: usize = 64;

/// The partition frame on a base grid of `grid` points, `grid ≥ 64n`.
pub fn build_partition(n: usize, grid: usize) -> Result<PartitionFrame> {
    let required = MIN_GRID_PER_SHEET * n.max(1);
    if grid < required {
        return Err(Error::GridTooCoarse { grid, required });
    }
    sampled_partition(n, grid)
}

/// The partition frame on any base grid, however coarse.
pub fn sampled_partition(n: usize, base_points: usize) -> Result<PartitionFrame> {
    let group = CyclicGroup::new(n)?;
    let cover = circle_sampled_cover(n, base_points)?;
    let big_n = base_points;
    let mut base_frame = [Vec::with_capacity(big_n), Vec::with_capacity(big_n)];
    // Sheet of each arc over each base point: which of the n lifts lies in the arc.
    let mut sheet = [Vec::with_capacity(big_n), Vec::with_capacity(big_n)];
    for i in 0..big_n {
        let phi = TAU * i as f64 / big_n as f64;
        let a = partition_of_unity(phi);
        for (j, &(l, _)) in ARCS.iter().enumerate() {
            base_frame[j].push(Float::sqrt(a[j]));
            let x = representative(phi, l, TAU);
            let lift = Float::round((x - phi) / TAU) as i64;
            sheet[j].push(lift.rem_euclid(n as i64) as usize);
        }
    }
    let lifted: Vec<Vec<f64>> = (0..2)
        .map(|j| {
            let mut e = vec![0.0; n * big_n];
            for i in 0..big_n {
                e[i + big_n * sheet[j][i]] = base_frame[j][i];
            }
            e
        })
        .collect();
    let mut index = Vec::with_capacity(2 * n);
    let mut elements = Vec::with_capacity(2 * n);
    for g in group.elements() {
        let shift = cover.power(g.residue());
        for (j, e) in lifted.iter().enumerate() {
            index.push((g.residue(), j + 1));
            elements.push(SampledFunction::from_real(shift.iter().map(|&s| e[s])));
        }
    }
    let [b0, b1] = base_frame;
    Ok(PartitionFrame {
        n,
        base_points,
        group,
        cover,
        base_frame: [SampledFunction::from_real(b0), SampledFunction::from_real(b1)],
        index,
        elements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{conditional_expectation, is_invariant};
    use crate::verifier::{full_report, verify_frame};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn convolution_matches_expansion() {
        let a = CirclePoly::from_terms(4, &[(1, ONE), (-1, ONE)]).unwrap();
        let b = CirclePoly::from_terms(4, &[(1, ONE), (-1, -ONE)]).unwrap();
        let p = a.multiply(&b).unwrap();
        let expect = CirclePoly::from_terms(4, &[(2, ONE), (-2, -ONE)]).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn overflow_is_loud() {
        let v3 = CirclePoly::monomial(3, 4).unwrap();
        assert_eq!(v3.multiply(&v3), Err(Error::DegreeOverflow { needed: 6, bound: 4 }));
        assert_eq!(v3.multiply_truncated(&v3, 4), CirclePoly::zero(4));
        // v^3 v^-3 = 1 fits even though 3 + 3 > 4.
        assert_eq!(v3.multiply(&v3.adjoint()).unwrap(), CirclePoly::one(4));
    }

    #[test]
    fn adjoint_conjugates_and_flips() {
        let a = CirclePoly::from_terms(3, &[(2, c(0.0, 1.0))]).unwrap();
        assert_eq!(a.adjoint(), CirclePoly::from_terms(3, &[(-2, c(0.0, -1.0))]).unwrap());
    }

    #[test]
    fn sup_norm_examples() {
        let p = CirclePoly::from_terms(2, &[(1, ONE), (-1, ONE)]).unwrap();
        assert!((p.sup_norm(64).unwrap() - 2.0).abs() < 1e-14);
        assert!((CirclePoly::monomial(-2, 2).unwrap().sup_norm(9).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(p.sup_norm(8), Err(Error::GridTooCoarse { grid: 8, required: 9 }));
    }

    #[test]
    fn rotation_by_pi_negates_v() {
        let v = CirclePoly::monomial(1, 2).unwrap();
        assert!(v.rotate(PI).max_coeff_distance(&v.scale(-ONE)) < 1e-15);
        assert!(v.rotate(TAU).max_coeff_distance(&v) < 1e-15);
    }

    #[test]
    fn embedding_dilates_indices() {
        let u = CirclePoly::from_terms(1, &[(1, ONE), (-1, ONE)]).unwrap();
        let v = u.embed_base(2, 4).unwrap();
        assert_eq!(v, CirclePoly::from_terms(4, &[(2, ONE), (-2, ONE)]).unwrap());
        assert_eq!(CirclePoly::monomial(1, 1).unwrap().embed_base(3, 3).unwrap(), CirclePoly::monomial(3, 3).unwrap());
        assert!(u.embed_base(3, 2).is_err());
    }

    #[test]
    fn deck_action_examples() {
        let act = CircleDeckAction::new(3, 4).unwrap();
        let g1 = act.group().element(1);
        let v2 = CirclePoly::monomial(2, 4).unwrap();
        let once = act.act(g1, &v2).unwrap();
        let gv = act.act(g1, &CirclePoly::monomial(1, 4).unwrap()).unwrap();
        assert!(once.max_coeff_distance(&gv.multiply(&gv).unwrap()) < 1e-15);
        let twice = act.act(g1, &gv).unwrap();
        let g2v = act.act(act.group().element(2), &CirclePoly::monomial(1, 4).unwrap()).unwrap();
        assert!(twice.max_coeff_distance(&g2v) < 1e-15);
        assert!((once.coeff(2) - cis(4.0 * PI / 3.0)).norm() < 1e-15);

        let z2 = CircleDeckAction::new(2, 4).unwrap();
        let v = CirclePoly::monomial(1, 4).unwrap();
        assert!(z2.act(z2.group().element(1), &v).unwrap().max_coeff_distance(&v.scale(-ONE)) < 1e-15);
        assert!(!is_invariant(&v, &z2, 1e-10).unwrap());
        assert!(is_invariant(&CirclePoly::monomial(2, 4).unwrap(), &z2, 1e-10).unwrap());
    }

    #[test]
    fn expectation_sieves_by_residue() {
        let act = CircleDeckAction::new(5, 8).unwrap();
        for m in -8..=8i64 {
            let vm = CirclePoly::monomial(m, 8).unwrap();
            let e = conditional_expectation(&vm, &act).unwrap();
            let expect = if m % 5 == 0 { vm } else { CirclePoly::zero(8) };
            assert_eq!(e, expect, "m = {m}");
        }
    }

    #[test]
    fn monomial_covering_passes_exactly() {
        for n in 1..=5 {
            let cov = CircleCover::new(n, 16).unwrap().monomial_covering().unwrap();
            let r = full_report(&cov, 1e-10, 1e-10);
            assert!(r.passed(), "n = {n}: {r:?}");
            assert!(r.condition_b.trivial_g_residual <= 1e-15);
        }
    }

    #[test]
    fn smoothstep_limits() {
        assert_eq!(smoothstep(0.0), 0.0);
        assert_eq!(smoothstep(1.0), 1.0);
        assert!((smoothstep(0.5) - 0.5).abs() < 1e-15);
        assert_eq!(bump(0, 1.0), 0.0);
        assert_eq!(bump(1, 4.0), 0.0);
        assert_eq!(bump(0, 4.0), 1.0);
    }

    #[test]
    fn partition_squares_sum_to_one() {
        let f = build_partition(1, 4096).unwrap();
        assert!(f.is_degenerate());
        let worst = (0..4096)
            .map(|i| (f.base_frame[0].values[i].norm_sqr() + f.base_frame[1].values[i].norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-14);
    }

    #[test]
    fn partition_frame_identity() {
        for n in 2..=3 {
            let f = build_partition(n, 1024).unwrap();
            let r = verify_frame(&f.covering(), 1e-8);
            assert!(r.pass, "n = {n}: {r:?}");
        }
        assert_eq!(build_partition(4, 100).unwrap_err(), Error::GridTooCoarse { grid: 100, required: 256 });
    }

    #[test]
    fn sheets_are_disjoint() {
        let f = build_partition(3, 512).unwrap();
        let cov = f.covering();
        for e in &f.elements {
            for g in cov.structure.group().elements().skip(1) {
                let ge = cov.structure.apply(g, e);
                assert!(e.values.iter().zip(&ge.values).all(|(a, b)| (a * b).norm() == 0.0));
            }
        }
    }
}
