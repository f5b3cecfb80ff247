//! Rational noncommutative tori in the clock/shift representation and their
//! cyclic covers `w = μ(u)`.
//!
//! With `U = diag(ω^j)`, `ω = e^{2πip/q}`, and the shift `V e_j = e_{j+1}`,
//! the pair satisfies `UV = e^{2πiθ} VU` for `θ = p/q`. A root `W = μ(U)`
//! satisfies `WV = λ VW` entrywise with `λ` drawn from the ratios
//! `μ(ω^{j+1}) / μ(ω^j)`, each an nth root of `e^{2πiθ}`. The phase is written
//! `λ = e^{2πiθ̃}` and `θ̃ = (k + θ)/n` for an integer `k`.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Float;

use crate::algebra::{op_norm, BlockAlgebra, BlockMatrix, CMatrix, StarAlgebra};
use crate::calculus::{BorelRootMap, UnitaryMatrix};
use crate::groups::{CyclicGroup, GroupAction, GroupElement};
use crate::util::{arg_positive, cis, root_of_unity};
use crate::verifier::{CoverStructure, CoveringData};
use crate::{Error, Result};

/// Ratios closer than this are treated as one candidate phase.
pub const CLUSTER_TOLERANCE: f64 = 1e-9;
/// Commutation residual below which the twist counts as scalar.
pub const SCALAR_TOLERANCE: f64 = 1e-9;
/// Minimum grid for [`theta_integral`].
pub const MIN_INTEGRAL_GRID: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct TorusPair {
    pub u: UnitaryMatrix,
    pub v: UnitaryMatrix,
    pub p: i64,
    pub q: usize,
}

impl TorusPair {
    pub fn theta(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `‖UV − e^{2πiθ} VU‖`.
    pub fn relation_residual(&self) -> f64 {
        let (u, v) = (self.u.matrix(), self.v.matrix());
        op_norm(&(u * v - v * u * root_of_unity(self.p, self.q)))
    }

    /// `max(‖U^q − I‖, ‖V^q − I‖)`.
    pub fn order_residual(&self) -> f64 {
        let id = CMatrix::identity(self.q, self.q);
        let uq = self.u.matrix().pow(self.q as u32);
        let vq = self.v.matrix().pow(self.q as u32);
        op_norm(&(uq - &id)).max(op_norm(&(vq - &id)))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Clock `U = diag(1, ω, …, ω^{q−1})` and cyclic shift `V`, for `0 ≤ p < q`, `gcd(p, q) = 1`.
pub fn clock_shift(p: i64, q: usize) -> Result<TorusPair> {
    if q == 0 || p < 0 || p >= q as i64 {
        return Err(Error::InvalidParameter("need 0 <= p < q".into()));
    }
    if gcd(p, q as i64) != 1 {
        return Err(Error::NotCoprime { p, q: q as i64 });
    }
    let zero = Complex64::new(0.0, 0.0);
    let u = CMatrix::from_fn(q, q, |i, j| if i == j { root_of_unity(p * i as i64, q) } else { zero });
    let v = CMatrix::from_fn(q, q, |i, j| if i == (j + 1) % q { Complex64::new(1.0, 0.0) } else { zero });
    Ok(TorusPair { u: UnitaryMatrix::new(u)?, v: UnitaryMatrix::new(v)?, p, q })
}

/// One candidate phase and how many matched entries carry it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCluster {
    pub lambda: Complex64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverResult {
    pub n: usize,
    pub theta: f64,
    pub w: UnitaryMatrix,
    /// The chosen phase, `‖WV − λVW‖_F` minimal among the observed ratios.
    pub lambda: Complex64,
    /// `arg(λ)/2π ∈ [0, 1)`.
    pub theta_tilde: f64,
    /// `round(nθ̃ − θ)` reduced into `0..n`.
    pub k: i64,
    /// `|nθ̃ − θ − round(nθ̃ − θ)|`.
    pub integrality_residual: f64,
    /// `‖WV − λVW‖` in the operator norm.
    pub residual: f64,
    /// `‖W^n − U‖`.
    pub power_residual: f64,
    /// `|λ^n − e^{2πiθ}|`.
    pub phase_law_residual: f64,
    /// Unconstrained least-squares phase over all matched entries.
    pub twist_mean: Complex64,
    pub twist_profile: Vec<PhaseCluster>,
    pub scalar_twist: bool,
}

/// `W = μ(U)` and the commutation phase of `W` against `V`.
pub fn cyclic_cover_torus(pair: &TorusPair, n: usize, mu: &BorelRootMap) -> Result<CoverResult> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if mu.n != n {
        return Err(Error::InvalidParameter("root map order differs from n".into()));
    }
    let theta = pair.theta();
    let w = UnitaryMatrix::with_tolerance(mu.apply(&pair.u)?, 1e-9)?;
    let (wm, vm) = (w.matrix(), pair.v.matrix());
    let wv = wm * vm;
    let vw = vm * wm;

    let mut ratios = Vec::new();
    let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
    for i in 0..pair.q {
        for j in 0..pair.q {
            let (a, b) = (wv[(i, j)], vw[(i, j)]);
            num += b.conj() * a;
            den += b.norm_sqr();
            if b.norm() > 1e-12 {
                ratios.push(a / b);
            }
        }
    }
    if ratios.is_empty() {
        return Err(Error::InvalidParameter("VW has no nonzero entries".into()));
    }

    let mut profile: Vec<PhaseCluster> = Vec::new();
    for r in &ratios {
        match profile.iter_mut().find(|c| (c.lambda - r).norm() <= CLUSTER_TOLERANCE) {
            Some(c) => c.count += 1,
            None => profile.push(PhaseCluster { lambda: r / r.norm(), count: 1 }),
        }
    }
    profile.sort_by(|a, b| arg_positive(a.lambda).total_cmp(&arg_positive(b.lambda)));

    let frobenius = |l: Complex64| (&wv - &vw * l).norm();
    let mut best = profile[0].lambda;
    let mut best_res = frobenius(best);
    for c in &profile[1..] {
        let res = frobenius(c.lambda);
        if res < best_res - 1e-12 {
            best = c.lambda;
            best_res = res;
        }
    }

    let theta_tilde = arg_positive(best) / TAU;
    let k_real = n as f64 * theta_tilde - theta;
    let k_round = Float::round(k_real);
    let residual = op_norm(&(&wv - &vw * best));
    Ok(CoverResult {
        n,
        theta,
        lambda: best,
        theta_tilde,
        k: (k_round as i64).rem_euclid(n as i64),
        integrality_residual: (k_real - k_round).abs(),
        residual,
        power_residual: op_norm(&(wm.pow(n as u32) - pair.u.matrix())),
        phase_law_residual: (best.powu(n as u32) - cis(TAU * theta)).norm(),
        twist_mean: num / den,
        twist_profile: profile,
        scalar_twist: residual <= SCALAR_TOLERANCE,
        w,
    })
}

/// Fails unless `WV = λVW` holds with a single scalar `λ` to within `tol`.
pub fn certify_scalar_twist(result: &CoverResult, tol: f64) -> Result<()> {
    if result.residual <= tol {
        Ok(())
    } else {
        Err(Error::NonScalarTwist { residual: result.residual })
    }
}

/// Mean of `μ(e^{2πiθ} z) / μ(z)` over the uniform grid `z = e^{2πij/grid}`.
///
/// On a ratio that is piecewise `e^{2πiθ/n}` and `e^{2πi(θ−1)/n}`, the mean
/// equals [`CoverResult::twist_mean`] of the clock/shift cover exactly in the
/// continuum; the grid sum differs by at most `4/grid`.
pub fn theta_integral(mu: &BorelRootMap, theta: f64, grid: usize) -> Result<Complex64> {
    if grid < MIN_INTEGRAL_GRID {
        return Err(Error::GridTooCoarse { grid, required: MIN_INTEGRAL_GRID });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..grid {
        let phi = TAU * j as f64 / grid as f64;
        acc += mu.eval_angle(phi + TAU * theta) / mu.eval_angle(phi);
    }
    Ok(acc / grid as f64)
}

/// `A[w] ⊃ A = M_q` modelled as `n` diagonal blocks, `w̃ = ⊕_l ω_n^l W`.
///
/// `k̄` acts by cycling blocks, `(k̄X)_l = X_{l+k}`, which sends `w̃` to
/// `e^{2πik/n} w̃` and fixes the diagonal copy of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusExtension {
    group: CyclicGroup,
    cover: BlockAlgebra,
    base: crate::algebra::MatrixAlgebra,
    generator: BlockMatrix,
}

impl TorusExtension {
    pub fn new(w: &UnitaryMatrix, n: usize) -> Result<Self> {
        let group = CyclicGroup::new(n)?;
        let q = w.dim();
        let generator = BlockMatrix { blocks: (0..n).map(|l| w.matrix() * root_of_unity(l as i64, n)).collect() };
        Ok(TorusExtension {
            group,
            cover: BlockAlgebra::new(n, q),
            base: crate::algebra::MatrixAlgebra::new(q),
            generator,
        })
    }

    pub fn generator(&self) -> &BlockMatrix {
        &self.generator
    }

    /// The frame `{w̃^j}_{0 ≤ j < n}` with weight `1/n`.
    pub fn covering(self) -> Result<CoveringData<TorusExtension>> {
        let n = self.group.order();
        let mut frame = Vec::with_capacity(n);
        let mut cur = self.cover.one();
        for _ in 0..n {
            frame.push(cur.clone());
            cur = self.cover.mul(&cur, &self.generator)?;
        }
        CoveringData::new(self, frame, 1.0 / n as f64)
    }
}

impl GroupAction for TorusExtension {
    type Algebra = BlockAlgebra;

    fn group(&self) -> CyclicGroup {
        self.group
    }

    fn algebra(&self) -> &BlockAlgebra {
        &self.cover
    }

    fn apply(&self, g: GroupElement, a: &BlockMatrix) -> BlockMatrix {
        let n = a.blocks.len();
        BlockMatrix { blocks: (0..n).map(|l| a.blocks[(l + g.residue()) % n].clone()).collect() }
    }
}

impl CoverStructure for TorusExtension {
    type Base = crate::algebra::MatrixAlgebra;

    fn base(&self) -> &crate::algebra::MatrixAlgebra {
        &self.base
    }

    fn embed(&self, a: &CMatrix) -> BlockMatrix {
        BlockMatrix::repeated(a, self.group.order())
    }

    fn retract(&self, a: &BlockMatrix) -> CMatrix {
        let n = a.blocks.len() as f64;
        a.blocks.iter().fold(CMatrix::zeros(self.base.size, self.base.size), |acc, b| acc + b) / Complex64::new(n, 0.0)
    }
}
