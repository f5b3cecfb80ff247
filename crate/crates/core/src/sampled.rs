//! Functions on finite point sets, and finite covers given by a point permutation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::StarAlgebra;
use crate::groups::{CyclicGroup, GroupAction, GroupElement};
use crate::verifier::CoverStructure;
use crate::{Error, Result};

/// A finite point set, optionally projected onto the points of another one.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampledSpace {
    pub points: Vec<String>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub projection: Option<BTreeMap<String, String>>,
}

impl SampledSpace {
    pub fn new(points: Vec<String>) -> Self {
        SampledSpace { points, projection: None }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p == id)
    }

    /// Projection as an index map into `base`, checked for totality and surjectivity.
    pub fn projection_indices(&self, base: &SampledSpace) -> Result<Vec<usize>> {
        let proj = self
            .projection
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("space has no projection".into()))?;
        let lookup: BTreeMap<&str, usize> = base.points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        let mut hit = vec![false; base.len()];
        let mut out = Vec::with_capacity(self.len());
        for y in &self.points {
            let x = proj.get(y).ok_or_else(|| Error::InvalidParameter(format!("point {y:?} has no image")))?;
            let i = *lookup
                .get(x.as_str())
                .ok_or_else(|| Error::InvalidParameter(format!("image {x:?} of {y:?} is not a base point")))?;
            hit[i] = true;
            out.push(i);
        }
        if let Some(miss) = hit.iter().position(|h| !h) {
            return Err(Error::NonSurjective(format!("base point {:?} has no preimage", base.points[miss])));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(values: Vec<Complex64>) -> Self {
        SampledFunction { values }
    }

    pub fn from_real(values: impl IntoIterator<Item = f64>) -> Self {
        SampledFunction { values: values.into_iter().map(|x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `C(X)` for a finite `X` of `points` points, with the max-modulus norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampledAlgebra {
    pub points: usize,
}

impl SampledAlgebra {
    pub fn new(points: usize) -> Self {
        SampledAlgebra { points }
    }

    pub fn constant(&self, c: Complex64) -> SampledFunction {
        SampledFunction { values: vec![c; self.points] }
    }

    pub fn from_fn(&self, f: impl Fn(usize) -> Complex64) -> SampledFunction {
        SampledFunction { values: (0..self.points).map(f).collect() }
    }
}

impl StarAlgebra for SampledAlgebra {
    type Elem = SampledFunction;

    fn dimension(&self) -> usize {
        self.points
    }

    fn contains(&self, a: &SampledFunction) -> bool {
        a.values.len() == self.points
    }

    fn zero(&self) -> SampledFunction {
        self.constant(Complex64::new(0.0, 0.0))
    }

    fn one(&self) -> SampledFunction {
        self.constant(Complex64::new(1.0, 0.0))
    }

    fn add(&self, a: &SampledFunction, b: &SampledFunction) -> SampledFunction {
        SampledFunction { values: a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect() }
    }

    fn scale(&self, c: Complex64, a: &SampledFunction) -> SampledFunction {
        SampledFunction { values: a.values.iter().map(|x| c * x).collect() }
    }

    fn mul(&self, a: &SampledFunction, b: &SampledFunction) -> Result<SampledFunction> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::CarrierMismatch("factor of a sampled product"));
        }
        Ok(SampledFunction { values: a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect() })
    }

    fn adjoint(&self, a: &SampledFunction) -> SampledFunction {
        SampledFunction { values: a.values.iter().map(|x| x.conj()).collect() }
    }

    fn norm(&self, a: &SampledFunction) -> f64 {
        a.values.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    fn basis(&self) -> Vec<SampledFunction> {
        (0..self.points)
            .map(|i| self.from_fn(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)))
            .collect()
    }

    fn coords(&self, a: &SampledFunction) -> Vec<Complex64> {
        a.values.clone()
    }

    fn from_coords(&self, coords: &[Complex64]) -> SampledFunction {
        SampledFunction { values: coords.to_vec() }
    }
}

/// A finite cover `π: X̃ → X` with `Z_n` generated by a fiber-preserving permutation `σ`.
///
/// The action on functions is `(k·f)(t) = f(σ^k t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCover {
    group: CyclicGroup,
    base: SampledAlgebra,
    cover: SampledAlgebra,
    projection: Vec<usize>,
    powers: Vec<Vec<usize>>,
    fibers: Vec<Vec<usize>>,
}

impl SampledCover {
    /// Checks that `projection` is onto `base_points`, that `generator` is a
    /// permutation preserving fibers, and that `generator^n` is the identity.
    pub fn new(n: usize, base_points: usize, projection: Vec<usize>, generator: Vec<usize>) -> Result<Self> {
        let group = CyclicGroup::new(n)?;
        let m = projection.len();
        if generator.len() != m {
            return Err(Error::InvalidParameter(format!(
                "generator has {} entries for {m} cover points",
                generator.len()
            )));
        }
        let mut fibers = vec![Vec::new(); base_points];
        for (t, &x) in projection.iter().enumerate() {
            let fiber = fibers
                .get_mut(x)
                .ok_or_else(|| Error::InvalidParameter(format!("cover point {t} projects outside the base")))?;
            fiber.push(t);
        }
        if let Some(x) = fibers.iter().position(Vec::is_empty) {
            return Err(Error::NonSurjective(format!("base point {x} has no preimage")));
        }
        let mut seen = vec![false; m];
        for (t, &s) in generator.iter().enumerate() {
            if s >= m || seen[s] {
                return Err(Error::InvalidParameter("generator is not a permutation".into()));
            }
            seen[s] = true;
            if projection[s] != projection[t] {
                return Err(Error::InvalidParameter(format!("generator moves point {t} to another fiber")));
            }
        }
        let mut powers = Vec::with_capacity(n);
        powers.push((0..m).collect::<Vec<_>>());
        for k in 1..n {
            let prev: &Vec<usize> = &powers[k - 1];
            powers.push(prev.iter().map(|&t| generator[t]).collect());
        }
        let full: Vec<usize> = powers[n - 1].iter().map(|&t| generator[t]).collect();
        if full.iter().enumerate().any(|(t, &s)| t != s) {
            return Err(Error::InvalidParameter(format!("generator does not have order dividing {n}")));
        }
        Ok(SampledCover {
            group,
            base: SampledAlgebra::new(base_points),
            cover: SampledAlgebra::new(m),
            projection,
            powers,
            fibers,
        })
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn fibers(&self) -> &[Vec<usize>] {
        &self.fibers
    }

    /// `σ^k` as an index map.
    pub fn power(&self, k: usize) -> &[usize] {
        &self.powers[k % self.powers.len()]
    }

    /// Freeness plus transitivity on every fiber, so that every fiber is one free orbit.
    pub fn check_free(&self) -> Result<()> {
        let n = self.group.order();
        for (k, p) in self.powers.iter().enumerate().skip(1) {
            if let Some(t) = p.iter().enumerate().position(|(t, &s)| t == s) {
                return Err(Error::NonFreeCover(format!("point {t} is fixed by {k}")));
            }
        }
        for (x, fiber) in self.fibers.iter().enumerate() {
            if fiber.len() != n {
                return Err(Error::NonFreeCover(format!("fiber over {x} has {} points, expected {n}", fiber.len())));
            }
        }
        Ok(())
    }

    pub fn is_free(&self) -> bool {
        self.check_free().is_ok()
    }
}

impl GroupAction for SampledCover {
    type Algebra = SampledAlgebra;

    fn group(&self) -> CyclicGroup {
        self.group
    }

    fn algebra(&self) -> &SampledAlgebra {
        &self.cover
    }

    fn apply(&self, g: GroupElement, a: &SampledFunction) -> SampledFunction {
        let p = &self.powers[g.residue()];
        SampledFunction { values: p.iter().map(|&s| a.values[s]).collect() }
    }
}

impl CoverStructure for SampledCover {
    type Base = SampledAlgebra;

    fn base(&self) -> &SampledAlgebra {
        &self.base
    }

    fn embed(&self, a: &SampledFunction) -> SampledFunction {
        SampledFunction { values: self.projection.iter().map(|&x| a.values[x]).collect() }
    }

    fn retract(&self, a: &SampledFunction) -> SampledFunction {
        SampledFunction {
            values: self
                .fibers
                .iter()
                .map(|f| f.iter().map(|&t| a.values[t]).sum::<Complex64>() / f.len() as f64)
                .collect(),
        }
    }
}

/// The `n`-fold cover of an `N`-point circle grid, `z ↦ z^n`.
///
/// Cover point `t` sits at angle `2πt/(nN)`; it projects to base point
/// `t mod N` and the generator is the rotation `t ↦ t + N`.
pub fn circle_sampled_cover(n: usize, base_points: usize) -> Result<SampledCover> {
    if base_points == 0 {
        return Err(Error::InvalidParameter("grid must have at least one point".into()));
    }
    let m = n * base_points;
    let projection = (0..m).map(|t| t % base_points).collect();
    let generator = (0..m).map(|t| (t + base_points) % m).collect();
    SampledCover::new(n, base_points, projection, generator)
}

/// Angles of the cover points of [`circle_sampled_cover`], in `[0, 2π)`.
pub fn cover_angles(n: usize, base_points: usize) -> Vec<f64> {
    let m = (n * base_points) as f64;
    (0..n * base_points).map(|t| 2.0 * PI * t as f64 / m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::conditional_expectation;

    #[test]
    fn circle_grid_cover_is_free() {
        let c = circle_sampled_cover(3, 8).unwrap();
        assert!(c.is_free());
        assert_eq!(c.fibers()[2], vec![2, 10, 18]);
        assert_eq!(c.power(2)[1], 17);
    }

    #[test]
    fn fixed_point_breaks_freeness() {
        // Two sheets over two points, but the generator swaps only the first fiber.
        let c = SampledCover::new(2, 2, vec![0, 1, 0, 1], vec![2, 1, 0, 3]).unwrap();
        assert!(matches!(c.check_free(), Err(Error::NonFreeCover(_))));
    }

    #[test]
    fn generator_of_wrong_order_is_rejected() {
        let r = SampledCover::new(2, 1, vec![0, 0, 0], vec![1, 2, 0]);
        assert!(matches!(r, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn expectation_is_fiber_average() {
        let c = circle_sampled_cover(2, 3).unwrap();
        let f = SampledFunction::from_real([1.0, 2.0, 3.0, 5.0, 6.0, 7.0]);
        let e = conditional_expectation(&f, &c).unwrap();
        assert_eq!(e, c.embed(&c.retract(&f)));
        assert_eq!(e.values[0].re, 3.0);
    }

    #[test]
    fn projection_must_be_onto() {
        let base = SampledSpace::new(vec!["a".into(), "b".into()]);
        let mut y = SampledSpace::new(vec!["p".into()]);
        y.projection = Some([("p".into(), "a".into())].into_iter().collect());
        assert!(matches!(y.projection_indices(&base), Err(Error::NonSurjective(_))));
    }
}
