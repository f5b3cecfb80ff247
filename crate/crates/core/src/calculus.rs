//! Borel functions of unitary matrices, in particular nth roots of the
//! identity on the circle.
//!
//! Roots can be transported along unitary paths; sampled loops get a winding number.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use nalgebra::linalg::Schur;
use num_complex::Complex64;
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::algebra::{op_norm, CMatrix};
use crate::util::{arg_positive, cis, rem, root_of_unity};
use crate::{Error, Result};

pub const UNITARY_TOLERANCE: f64 = 1e-10;
pub const UNIMODULAR_TOLERANCE: f64 = 1e-12;
pub const ROOT_TOLERANCE: f64 = 1e-9;

/// A square matrix with `‖UU* − I‖ ≤ 1e-10`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, UNITARY_TOLERANCE)
    }

    pub fn with_tolerance(m: CMatrix, tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidParameter("unitary must be a nonempty square matrix".into()));
        }
        let residual = unitarity_residual(&m);
        if !(residual <= tol) {
            return Err(Error::NotUnitary { residual });
        }
        Ok(UnitaryMatrix(m))
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryMatrix(CMatrix::identity(dim, dim))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix(self.0.adjoint())
    }

    pub fn mul(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix(&self.0 * &other.0)
    }

    /// Haar-distributed unitary from a seeded Gaussian matrix (QR with phase fix).
    pub fn random(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut uniform = move || ((rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
        let mut gauss = move || {
            let r = Float::sqrt(-2.0 * Float::ln(uniform()));
            let t = TAU * uniform();
            Complex64::new(r * Float::cos(t), r * Float::sin(t))
        };
        let g = CMatrix::from_fn(dim, dim, |_, _| gauss());
        let qr = g.qr();
        let (q, r) = (qr.q(), qr.r());
        let phases = CMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                let d = r[(i, i)];
                d / d.norm()
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        UnitaryMatrix(q * phases)
    }
}

/// `‖UU* − I‖` in the operator norm.
pub fn unitarity_residual(m: &CMatrix) -> f64 {
    op_norm(&(m * m.adjoint() - CMatrix::identity(m.nrows(), m.ncols())))
}

/// `U = Q diag(λ) Q*` with `Q` unitary. Diagonal inputs are returned as is.
pub fn spectral(u: &UnitaryMatrix) -> Result<(CMatrix, Vec<Complex64>)> {
    let m = u.matrix();
    let q = m.nrows();
    let diagonal = (0..q).all(|i| (0..q).all(|j| i == j || m[(i, j)] == Complex64::new(0.0, 0.0)));
    if diagonal {
        return Ok((CMatrix::identity(q, q), (0..q).map(|i| m[(i, i)]).collect()));
    }
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| Error::InvalidParameter("Schur iteration did not converge".into()))?;
    let (basis, t) = schur.unpack();
    Ok((basis, (0..q).map(|i| t[(i, i)]).collect()))
}

/// `Q f(Λ) Q*`; eigenvalues are projected onto the circle before `f` is applied.
pub fn apply_borel(u: &UnitaryMatrix, f: impl Fn(Complex64) -> Complex64) -> Result<CMatrix> {
    let (q, eig) = spectral(u)?;
    let n = eig.len();
    let vals: Vec<Complex64> = eig.iter().map(|&l| f(l / l.norm())).collect();
    let d = CMatrix::from_fn(n, n, |i, j| if i == j { vals[i] } else { Complex64::new(0.0, 0.0) });
    Ok(&q * d * q.adjoint())
}

fn check_unimodular(z: Complex64) -> Result<()> {
    let modulus = z.norm();
    if !((modulus - 1.0).abs() <= UNIMODULAR_TOLERANCE) {
        return Err(Error::NotUnimodular { modulus });
    }
    Ok(())
}

/// `e^{iφ/n}` for `z = e^{iφ}`, `0 ≤ φ < 2π`.
pub fn standard_root(z: Complex64, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidParameter("root order must be at least 1".into()));
    }
    check_unimodular(z)?;
    Ok(cis(arg_positive(z) / n as f64))
}

/// One arc `[previous end, end)` of a twist, carrying `e^{2πik/n}`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwistArc {
    pub end: f64,
    pub k: usize,
}

/// An nth root of the identity map: the standard root times a root-of-unity
/// valued step function of the argument.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BorelRootMap {
    pub n: usize,
    #[cfg_attr(feature = "serde", serde(default))]
    pub twist: Vec<TwistArc>,
}

impl BorelRootMap {
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("root order must be at least 1".into()));
        }
        Ok(BorelRootMap { n, twist: Vec::new() })
    }

    /// Arcs must have strictly increasing ends in `(0, 2π]`, the last one `2π`.
    pub fn with_twist(n: usize, twist: Vec<TwistArc>) -> Result<Self> {
        let mut map = Self::standard(n)?;
        let mut prev = 0.0;
        for arc in &twist {
            if !(arc.end > prev && arc.end <= TAU) {
                return Err(Error::InvalidParameter("twist arc ends must increase within (0, 2π]".into()));
            }
            if arc.k >= n {
                return Err(Error::InvalidParameter("twist exponent must be below n".into()));
            }
            prev = arc.end;
        }
        if !twist.is_empty() && prev != TAU {
            return Err(Error::InvalidParameter("twist arcs must reach 2π".into()));
        }
        map.twist = twist;
        Ok(map)
    }

    /// A constant twist `e^{2πik/n}`.
    pub fn constant_twist(n: usize, k: usize) -> Result<Self> {
        Self::with_twist(n, alloc::vec![TwistArc { end: TAU, k }])
    }

    pub fn is_standard(&self) -> bool {
        self.twist.iter().all(|a| a.k == 0)
    }

    /// Exponent `k` of the twist at argument `phi ∈ [0, 2π)`.
    pub fn twist_index(&self, phi: f64) -> usize {
        self.twist.iter().find(|a| phi < a.end).map_or(0, |a| a.k)
    }

    pub fn nu(&self, phi: f64) -> Complex64 {
        root_of_unity(self.twist_index(phi) as i64, self.n)
    }

    /// `μ(e^{iψ})` from the angle itself, reduced into `[0, 2π)` without a
    /// round trip through the complex exponential.
    pub fn eval_angle(&self, psi: f64) -> Complex64 {
        let phi = rem(psi, TAU);
        cis(phi / self.n as f64) * self.nu(phi)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let root = standard_root(z, self.n)?;
        Ok(root * self.nu(arg_positive(z)))
    }

    pub fn apply(&self, u: &UnitaryMatrix) -> Result<CMatrix> {
        let (q, eig) = spectral(u)?;
        let n = eig.len();
        let mut vals = Vec::with_capacity(n);
        for l in eig {
            vals.push(self.eval(l / l.norm())?);
        }
        let d = CMatrix::from_fn(n, n, |i, j| if i == j { vals[i] } else { Complex64::new(0.0, 0.0) });
        Ok(&q * d * q.adjoint())
    }
}

/// Split of a sampled nth root of the identity into standard root and twist.
#[derive(Debug, Clone, PartialEq)]
pub struct RootDecomposition {
    pub standard: Vec<Complex64>,
    pub twist: Vec<Complex64>,
    pub twist_index: Vec<usize>,
    pub residual: f64,
}

/// Decomposes samples `μ(e^{iφ_i})` on the uniform grid `φ_i = 2πi/N`.
pub fn root_decompose(samples: &[Complex64], n: usize) -> Result<RootDecomposition> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("no samples".into()));
    }
    let grid = samples.len();
    let mut out = RootDecomposition {
        standard: Vec::with_capacity(grid),
        twist: Vec::with_capacity(grid),
        twist_index: Vec::with_capacity(grid),
        residual: 0.0,
    };
    for (i, &mu) in samples.iter().enumerate() {
        let z = cis(TAU * i as f64 / grid as f64);
        let power_residual = (mu.powu(n as u32) - z).norm();
        if !(power_residual <= ROOT_TOLERANCE) {
            return Err(Error::NotRootOfIdentity { residual: power_residual });
        }
        let s = standard_root(z, n)?;
        let nu = mu / s;
        let k = (Float::round(arg_positive(nu) * n as f64 / TAU) as i64).rem_euclid(n as i64);
        let snapped = root_of_unity(k, n);
        let dev = (nu - snapped).norm();
        if !(dev <= ROOT_TOLERANCE) {
            return Err(Error::NotRootOfIdentity { residual: dev });
        }
        out.residual = out.residual.max((s * nu - mu).norm());
        out.standard.push(s);
        out.twist.push(nu);
        out.twist_index.push(k as usize);
    }
    Ok(out)
}

/// The rotated standard root `φ ↦ μ_n(e^{i(φ+s)})` written as `c · μ_n · ν′`.
///
/// The constant is `c = e^{is/n}` (`s` in radians) and `ν′` is a root-of-unity
/// valued step function absorbing the wrap of the argument past `2π`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationDecomposition {
    pub constant: Complex64,
    pub twist: Vec<Complex64>,
    pub twist_index: Vec<usize>,
    pub residual: f64,
}

pub fn rotation_decompose(n: usize, s: f64, grid: usize) -> Result<RotationDecomposition> {
    if n == 0 || grid == 0 {
        return Err(Error::InvalidParameter("n and grid must be positive".into()));
    }
    let constant = cis(s / n as f64);
    let mut out = RotationDecomposition { constant, twist: Vec::new(), twist_index: Vec::new(), residual: 0.0 };
    for i in 0..grid {
        let phi = TAU * i as f64 / grid as f64;
        let rotated = standard_root(cis(phi + s), n)?;
        let base = standard_root(cis(phi), n)?;
        let nu = rotated / (constant * base);
        let k = (Float::round(arg_positive(nu) * n as f64 / TAU) as i64).rem_euclid(n as i64);
        let snapped = root_of_unity(k, n);
        out.residual = out.residual.max((constant * base * snapped - rotated).norm());
        out.twist.push(nu);
        out.twist_index.push(k as usize);
    }
    Ok(out)
}

/// Principal nth root of a unitary close to `I`: `exp(Log(R)/n)`.
pub fn principal_root(r: &UnitaryMatrix, n: usize) -> Result<CMatrix> {
    let n = n as f64;
    apply_borel(r, |z| {
        let a = Float::atan2(z.im, z.re);
        cis(a / n)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transport {
    pub w: CMatrix,
    /// `‖μ(u_last) − w μ(u_first)‖`.
    pub residual: f64,
    pub steps: usize,
    /// Largest `‖R_j − I‖` over the step ratios.
    pub max_step_distance: f64,
}

/// `w = prod_j R_j^{1/n}` over the step ratios `R_j = u_{j+1} u_j*`, later
/// factors on the left, each root principal.
///
/// The transport identity `μ(u_last) = w μ(u_first)` holds for paths of
/// commuting unitaries whose eigenvalues stay off the branch cut of `μ`;
/// otherwise the residual measures how far it fails.
pub fn homotopy_transport(path: &[UnitaryMatrix], mu: &BorelRootMap) -> Result<Transport> {
    let first = path.first().ok_or_else(|| Error::InvalidParameter("empty path".into()))?;
    let dim = first.dim();
    if path.iter().any(|u| u.dim() != dim) {
        return Err(Error::InvalidParameter("path matrices differ in size".into()));
    }
    let identity = CMatrix::identity(dim, dim);
    let mut w = identity.clone();
    let mut max_step = 0.0f64;
    for (j, pair) in path.windows(2).enumerate() {
        let r = pair[1].matrix() * pair[0].matrix().adjoint();
        let distance = op_norm(&(&r - &identity));
        if !(distance < 1.0) {
            return Err(Error::StepInadmissible { step: j, distance });
        }
        max_step = max_step.max(distance);
        let r = UnitaryMatrix::with_tolerance(r, 1e-8)?;
        w = principal_root(&r, mu.n)? * w;
    }
    let last = path.last().expect("nonempty");
    let residual = op_norm(&(mu.apply(last)? - &w * mu.apply(first)?));
    Ok(Transport { w, residual, steps: path.len() - 1, max_step_distance: max_step })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding {
    pub winding: i64,
    /// Total unwrapped turns, before rounding.
    pub total_turns: f64,
    /// `|total_turns − winding|`.
    pub defect: f64,
}

fn increment(a: Complex64, b: Complex64) -> f64 {
    let r = b * a.conj();
    Float::atan2(r.im, r.re)
}

/// Degree of a closed circle-valued loop sampled on a uniform grid.
pub fn winding_number(samples: &[Complex64]) -> Result<Winding> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("no samples".into()));
    }
    if let Some(z) = samples.iter().find(|z| z.norm() == 0.0 || !z.norm().is_finite()) {
        return Err(Error::NotUnimodular { modulus: z.norm() });
    }
    let m = samples.len();
    let mut total = 0.0;
    for i in 0..m {
        let d = increment(samples[i], samples[(i + 1) % m]);
        if !(d.abs() < PI) {
            return Err(Error::Undersampled { index: i, jump: d });
        }
        total += d;
    }
    let turns = total / TAU;
    let winding = Float::round(turns) as i64;
    Ok(Winding { winding, total_turns: turns, defect: (turns - winding as f64).abs() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchAnalysis {
    /// Turns of the loop with every jump replaced by the mean of its neighbouring steps.
    pub continuous_turns: f64,
    /// Distance of `continuous_turns` to the nearest integer.
    pub fractional_defect: f64,
    /// Sample indices after which a jump occurs.
    pub jumps: Vec<usize>,
}

/// Separates a sampled loop into smooth steps (`|Δ| ≤ max_step`) and jumps.
///
/// A Borel root `μ_n(u)` of a loop `u` of degree `m` jumps at the branch cut;
/// its smooth part turns `m/n` times, which is fractional unless `n | m`.
pub fn branch_analysis(samples: &[Complex64], max_step: f64) -> Result<BranchAnalysis> {
    let m = samples.len();
    if m < 3 {
        return Err(Error::InvalidParameter("need at least three samples".into()));
    }
    let steps: Vec<f64> = (0..m).map(|i| increment(samples[i], samples[(i + 1) % m])).collect();
    let smooth = |i: usize| steps[i].abs() <= max_step;
    let jumps: Vec<usize> = (0..m).filter(|&i| !smooth(i)).collect();
    if jumps.len() * 2 > m {
        return Err(Error::Undersampled { index: jumps[0], jump: steps[jumps[0]] });
    }
    let neighbour = |i: usize, dir: isize| -> f64 {
        let mut k = i as isize;
        for _ in 0..m {
            k = (k + dir).rem_euclid(m as isize);
            if smooth(k as usize) {
                return steps[k as usize];
            }
        }
        0.0
    };
    let total: f64 =
        (0..m).map(|i| if smooth(i) { steps[i] } else { 0.5 * (neighbour(i, -1) + neighbour(i, 1)) }).sum();
    let turns = total / TAU;
    Ok(BranchAnalysis {
        continuous_turns: turns,
        fractional_defect: (turns - Float::round(turns)).abs(),
        jumps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag(v: &[Complex64]) -> CMatrix {
        CMatrix::from_fn(v.len(), v.len(), |i, j| if i == j { v[i] } else { c(0.0, 0.0) })
    }

    #[test]
    fn standard_root_examples() {
        assert_eq!(standard_root(c(1.0, 0.0), 5).unwrap(), c(1.0, 0.0));
        assert!((standard_root(cis(PI), 2).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        assert!((standard_root(cis(1.5 * PI), 3).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        assert!(matches!(standard_root(c(1.1, 0.0), 2), Err(Error::NotUnimodular { .. })));
    }

    #[test]
    fn borel_on_diagonal() {
        let u = UnitaryMatrix::new(diag(&[c(1.0, 0.0), c(-1.0, 0.0)])).unwrap();
        let w = BorelRootMap::standard(2).unwrap().apply(&u).unwrap();
        assert!((w - diag(&[c(1.0, 0.0), c(0.0, 1.0)])).norm() < 1e-15);
        assert_eq!(apply_borel(&u, |z| z).unwrap(), *u.matrix());
    }

    #[test]
    fn cube_root_of_random_unitary() {
        let u = UnitaryMatrix::random(4, 11);
        let w = BorelRootMap::standard(3).unwrap().apply(&u).unwrap();
        assert!(op_norm(&(&w * &w * &w - u.matrix())) < 1e-9);
        assert!(unitarity_residual(&w) < 1e-9);
    }

    #[test]
    fn non_unitary_is_rejected() {
        let m = diag(&[c(2.0, 0.0)]);
        assert!(matches!(UnitaryMatrix::new(m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn twist_decomposition() {
        let grid = 64;
        let z = |i: usize| cis(TAU * i as f64 / grid as f64);
        let plain: Vec<_> = (0..grid).map(|i| standard_root(z(i), 3).unwrap()).collect();
        let d = root_decompose(&plain, 3).unwrap();
        assert!(d.twist_index.iter().all(|&k| k == 0));

        let w = root_of_unity(1, 3);
        let shifted: Vec<_> = plain.iter().map(|s| s * w).collect();
        let d = root_decompose(&shifted, 3).unwrap();
        assert!(d.twist_index.iter().all(|&k| k == 1));
        assert!(d.residual < 1e-15);

        let half: Vec<_> = (0..grid)
            .map(|i| standard_root(z(i), 2).unwrap() * if i < grid / 2 { 1.0 } else { -1.0 })
            .collect();
        let d = root_decompose(&half, 2).unwrap();
        assert_eq!(d.twist_index[..grid / 2], [0; 32]);
        assert_eq!(d.twist_index[grid / 2..], [1; 32]);

        let bad: Vec<_> = (0..grid).map(z).collect();
        assert!(matches!(root_decompose(&bad, 2), Err(Error::NotRootOfIdentity { .. })));
    }

    #[test]
    fn rotation_constant_is_s_over_n() {
        let d = rotation_decompose(3, 1.0, 256).unwrap();
        assert!((d.constant - cis(1.0 / 3.0)).norm() < 1e-15);
        assert!(d.residual < 1e-12);
        // ν′ jumps once, where φ + s passes 2π.
        let switches = d.twist_index.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(switches, 1);
    }

    #[test]
    fn scalar_path_transport() {
        let path: Vec<_> =
            (0..=8).map(|j| UnitaryMatrix::new(CMatrix::identity(2, 2) * cis(PI * j as f64 / 8.0)).unwrap()).collect();
        let t = homotopy_transport(&path, &BorelRootMap::standard(2).unwrap()).unwrap();
        assert!((&t.w - CMatrix::identity(2, 2) * c(0.0, 1.0)).norm() < 1e-14);
        assert!(t.residual < 1e-14);
        let constant = alloc::vec![UnitaryMatrix::identity(3); 5];
        let t = homotopy_transport(&constant, &BorelRootMap::standard(3).unwrap()).unwrap();
        assert_eq!(t.w, CMatrix::identity(3, 3));
    }

    #[test]
    fn large_step_is_refused() {
        let path = alloc::vec![UnitaryMatrix::identity(1), UnitaryMatrix::new(diag(&[cis(2.0)])).unwrap()];
        assert!(matches!(
            homotopy_transport(&path, &BorelRootMap::standard(2).unwrap()),
            Err(Error::StepInadmissible { step: 0, .. })
        ));
    }

    #[test]
    fn winding_examples() {
        let loop_of = |m: i64| -> Vec<Complex64> { (0..512).map(|i| cis(m as f64 * TAU * i as f64 / 512.0)).collect() };
        assert_eq!(winding_number(&[c(1.0, 0.0); 16]).unwrap().winding, 0);
        assert_eq!(winding_number(&loop_of(1)).unwrap().winding, 1);
        assert_eq!(winding_number(&loop_of(5)).unwrap().winding, 5);
        assert!(matches!(winding_number(&loop_of(256)), Err(Error::Undersampled { .. })));
    }

    #[test]
    fn root_of_degree_one_loop_has_fractional_turns() {
        let n = 3;
        let v: Vec<_> = (0..512).map(|i| standard_root(cis(TAU * i as f64 / 512.0), n).unwrap()).collect();
        let b = branch_analysis(&v, PI / n as f64).unwrap();
        assert_eq!(b.jumps.len(), 1);
        assert!((b.continuous_turns - 1.0 / 3.0).abs() < 1e-12);
    }
}
