//! Étale fiber products: cyclic decomposition over the base, pullback of a
//! finite cover along a surjection, and the audit of a fiber quadruple
//! `(A ⊂ Ã, B ⊂ B̃)`.
//!
//! All carriers here are unital, so the multiplier algebra of `B` is `B`
//! itself and the inclusion of `A` lands directly in `B`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Float;

use crate::algebra::{BlockMatrix, CMatrix, StarAlgebra};
use crate::calculus::{BorelRootMap, UnitaryMatrix};
use crate::circle::CirclePoly;
use crate::groups::{CyclicGroup, GroupAction, GroupElement};
use crate::sampled::{circle_sampled_cover, SampledAlgebra, SampledCover, SampledFunction};
use crate::torus::{cyclic_cover_torus, TorusExtension, TorusPair};
use crate::util::root_of_unity;
use crate::verifier::{
    full_report, verify_frame, BaseElem, CoverElem, CoverStructure, CoveringData, Metadata,
    VerificationReport,
};
use crate::{Error, Result};

/// Reassembly tolerance for cyclic decompositions.
pub const DECOMPOSITION_TOLERANCE: f64 = 1e-12;
pub const PARTITION_TOLERANCE: f64 = 1e-9;
pub const FRAME_TOLERANCE: f64 = 1e-8;

/// Coefficients `a_0, …, a_{n−1}` over the base with `ã = sum_j v^j a_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicDecomposition<T> {
    pub coefficients: Vec<T>,
    pub residual: f64,
}

/// Splits a polynomial in `v` by index residue: `c_m` with `m = j + nk` goes
/// to coefficient `a_j` at `u^k`. Each `a_j` has degree bound `⌈D/n⌉`.
pub fn cyclic_decompose(a: &CirclePoly, n: usize) -> Result<CyclicDecomposition<CirclePoly>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let d = a.degree_bound();
    let base_bound = d.div_ceil(n);
    let mut coefficients = vec![CirclePoly::zero(base_bound); n];
    for (m, c) in a.terms() {
        let j = m.rem_euclid(n as i64);
        coefficients[j as usize].set((m - j) / n as i64, c)?;
    }
    let mut back = CirclePoly::zero(d);
    for (j, aj) in coefficients.iter().enumerate() {
        for (k, c) in aj.terms() {
            let cur = back.coeff(j as i64 + n as i64 * k);
            back.set(j as i64 + n as i64 * k, cur + c)?;
        }
    }
    let residual = back.max_coeff_distance(a);
    if residual > DECOMPOSITION_TOLERANCE {
        return Err(Error::DecompositionResidual { residual });
    }
    Ok(CyclicDecomposition { coefficients, residual })
}

/// `a_j = E(v^{−j} ã)` for a unitary generator `v` of the cover over the base.
///
/// Fails with the reassembly residual when `sum_j v^j a_j` misses `ã` by more
/// than `1e-12` relative to `max(1, ‖ã‖)`.
pub fn cyclic_decompose_with<S: CoverStructure>(
    structure: &S,
    generator: &CoverElem<S>,
    a: &CoverElem<S>,
) -> Result<CyclicDecomposition<BaseElem<S>>> {
    let alg = structure.algebra();
    if !alg.contains(a) || !alg.contains(generator) {
        return Err(Error::CarrierMismatch("argument of cyclic_decompose"));
    }
    let n = structure.group().order();
    let inv = alg.adjoint(generator);
    let scale = Complex64::new(1.0 / n as f64, 0.0);
    let mut coefficients = Vec::with_capacity(n);
    let mut back = alg.zero();
    let mut pos = alg.one();
    let mut neg = alg.one();
    for _ in 0..n {
        let aj = structure.retract(&alg.scale(scale, &structure.orbit_sum(&alg.mul(&neg, a)?)));
        back = alg.add(&back, &alg.mul(&pos, &structure.embed(&aj))?);
        coefficients.push(aj);
        pos = alg.mul(&pos, generator)?;
        neg = alg.mul(&neg, &inv)?;
    }
    let residual = alg.distance(&back, a);
    if residual > DECOMPOSITION_TOLERANCE * alg.norm(a).max(1.0) {
        return Err(Error::DecompositionResidual { residual });
    }
    Ok(CyclicDecomposition { coefficients, residual })
}

/// `Ỹ = X̃ ×_X Y` with `Z_n` acting on the first factor.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    /// `(x̃, y)` pairs, ordered by `y` and then by `x̃`.
    pub pairs: Vec<(usize, usize)>,
    /// The cover `Ỹ → Y`, `(x̃, y) ↦ y`.
    pub cover: SampledCover,
    /// Pullback of the `X̃` frame along `(x̃, y) ↦ x̃`.
    pub covering: CoveringData<SampledCover>,
}

/// Pulls the verified cover `X̃ → X` back along the surjection `y_projection: Y → X`.
pub fn build_fiber_product(cover_x: &CoveringData<SampledCover>, y_projection: &[usize]) -> Result<FiberProduct> {
    let cx = &cover_x.structure;
    cx.check_free()?;
    let base_points = cx.base().points;
    let mut hit = vec![false; base_points];
    for (y, &x) in y_projection.iter().enumerate() {
        if x >= base_points {
            return Err(Error::InvalidParameter(format!("point {y} of Y projects outside X")));
        }
        hit[x] = true;
    }
    if let Some(x) = hit.iter().position(|h| !h) {
        return Err(Error::NonSurjective(format!("base point {x} has no preimage in Y")));
    }
    let mut pairs = Vec::with_capacity(y_projection.len() * cx.group().order());
    let mut lookup = BTreeMap::new();
    for (y, &x) in y_projection.iter().enumerate() {
        for &xt in &cx.fibers()[x] {
            lookup.insert((xt, y), pairs.len());
            pairs.push((xt, y));
        }
    }
    let sigma = cx.power(1);
    let generator = pairs.iter().map(|&(xt, y)| lookup[&(sigma[xt], y)]).collect();
    let projection = pairs.iter().map(|&(_, y)| y).collect();
    let cover = SampledCover::new(cx.group().order(), y_projection.len(), projection, generator)?;
    let frame = cover_x
        .frame
        .iter()
        .map(|f| SampledFunction::new(pairs.iter().map(|&(xt, _)| f.values[xt]).collect()))
        .collect();
    let covering = CoveringData::new(cover.clone(), frame, cover_x.frame_weight)?;
    Ok(FiberProduct { pairs, cover, covering })
}

/// A covering `(A, Ã)` pulled back to a cover structure `(B, B̃)` along
/// `A → B` and `Ã → B̃`, with a partition of unity in `B`.
pub trait FiberQuadruple {
    type CoverA: CoverStructure;
    type CoverB: CoverStructure;

    fn cover_a(&self) -> &CoveringData<Self::CoverA>;
    fn cover_b(&self) -> &Self::CoverB;
    /// Self-adjoint `{b_i}` in `B` with `sum_i b_i² = 1`.
    fn partition_b(&self) -> &[BaseElem<Self::CoverB>];
    fn base_to_multiplier(&self, a: &BaseElem<Self::CoverA>) -> BaseElem<Self::CoverB>;
    fn cover_to_total(&self, a: &CoverElem<Self::CoverA>) -> CoverElem<Self::CoverB>;
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MapResiduals {
    pub homomorphism: f64,
    pub star: f64,
    pub isometry: f64,
    pub unital: f64,
}

impl MapResiduals {
    fn max(&self) -> f64 {
        self.homomorphism.max(self.star).max(self.isometry).max(self.unital)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PartitionCheck {
    pub size: usize,
    pub sum_of_squares_residual: f64,
    pub self_adjoint_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InclusionCheck {
    pub cover_a: MapResiduals,
    pub cover_b: MapResiduals,
    pub base_to_multiplier: MapResiduals,
    pub cover_to_total: MapResiduals,
    /// `‖φ(ι_A(a)) − ι_B(ψ(a))‖` over base probes.
    pub square_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DensityCheck {
    pub columns: usize,
    pub targets: usize,
    pub rank: usize,
    pub dimension: usize,
    /// Largest least-squares miss over the target family.
    pub spanning_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CompatibilityWitness {
    pub g: usize,
    pub cover_probe: usize,
    pub base_probe: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CompatibilityCheck {
    /// `max ‖φ(gã) ι_B(b) − g(φ(ã) ι_B(b))‖`.
    pub residual: f64,
    pub witness: Option<CompatibilityWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiberVerdict {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
    pub e: bool,
}

impl FiberVerdict {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c && self.d && self.e
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiberReport {
    pub condition_a: VerificationReport,
    pub condition_b: PartitionCheck,
    pub condition_c: InclusionCheck,
    pub condition_d: DensityCheck,
    pub condition_e: CompatibilityCheck,
    pub verdict: FiberVerdict,
    pub metadata: Metadata,
}

impl FiberReport {
    pub fn passed(&self) -> bool {
        self.verdict.all()
    }
}

fn map_residuals<D: StarAlgebra, C: StarAlgebra>(
    dom: &D,
    cod: &C,
    f: impl Fn(&D::Elem) -> C::Elem,
    probes: &[D::Elem],
) -> MapResiduals {
    let mut r = MapResiduals { unital: cod.distance(&f(&dom.one()), &cod.one()), ..Default::default() };
    let images: Vec<C::Elem> = probes.iter().map(&f).collect();
    for (x, fx) in probes.iter().zip(&images) {
        r.star = r.star.max(cod.distance(&f(&dom.adjoint(x)), &cod.adjoint(fx)));
        r.isometry = r.isometry.max((cod.norm(fx) - dom.norm(x)).abs());
        for (y, fy) in probes.iter().zip(&images) {
            let res = match (dom.mul(x, y), cod.mul(fx, fy)) {
                (Ok(xy), Ok(fxfy)) => cod.distance(&f(&xy), &fxfy),
                _ => f64::INFINITY,
            };
            r.homomorphism = r.homomorphism.max(res);
        }
    }
    r
}

/// Checks conditions (a) to (e) of a fiber quadruple at tolerance `tol`.
pub fn verify_fiber_quadruple<Q: FiberQuadruple>(quad: &Q, tol: f64) -> FiberReport {
    let cov_a = quad.cover_a();
    let sa = &cov_a.structure;
    let sb = quad.cover_b();
    let (alg_a, base_a) = (sa.algebra(), sa.base());
    let (alg_b, base_b) = (sb.algebra(), sb.base());

    let condition_a = full_report(cov_a, tol, tol);

    let partition = quad.partition_b();
    let mut sum = base_b.zero();
    let mut self_adjoint = 0.0f64;
    let mut products_ok = true;
    for b in partition {
        self_adjoint = self_adjoint.max(base_b.distance(b, &base_b.adjoint(b)));
        match base_b.mul(b, b) {
            Ok(bb) => sum = base_b.add(&sum, &bb),
            Err(_) => products_ok = false,
        }
    }
    let condition_b = PartitionCheck {
        size: partition.len(),
        sum_of_squares_residual: if products_ok { base_b.distance(&sum, &base_b.one()) } else { f64::INFINITY },
        self_adjoint_residual: self_adjoint,
    };

    let probes_base_a = base_a.probes();
    let probes_a = alg_a.probes();
    let probes_base_b = base_b.probes();
    let mut square = 0.0f64;
    for a in &probes_base_a {
        let lhs = quad.cover_to_total(&sa.embed(a));
        let rhs = sb.embed(&quad.base_to_multiplier(a));
        square = square.max(alg_b.distance(&lhs, &rhs));
    }
    let condition_c = InclusionCheck {
        cover_a: map_residuals(base_a, alg_a, |x| sa.embed(x), &probes_base_a),
        cover_b: map_residuals(base_b, alg_b, |x| sb.embed(x), &probes_base_b),
        base_to_multiplier: map_residuals(base_a, base_b, |x| quad.base_to_multiplier(x), &probes_base_a),
        cover_to_total: map_residuals(alg_a, alg_b, |x| quad.cover_to_total(x), &probes_a),
        square_residual: square,
    };

    let condition_d = density(quad);

    let mut compat = CompatibilityCheck { residual: 0.0, witness: None };
    let mut compat_probes = cov_a.frame.clone();
    compat_probes.extend(probes_a.iter().cloned());
    for g in sa.group().elements().skip(1) {
        let gb = sb.group().element(g.residue() as i64);
        for (i, a) in compat_probes.iter().enumerate() {
            let phi_a = quad.cover_to_total(a);
            let phi_ga = quad.cover_to_total(&sa.apply(g, a));
            for (j, b) in probes_base_b.iter().enumerate() {
                let ib = sb.embed(b);
                let res = match (alg_b.mul(&phi_ga, &ib), alg_b.mul(&phi_a, &ib)) {
                    (Ok(lhs), Ok(prod)) => alg_b.distance(&lhs, &sb.apply(gb, &prod)),
                    _ => f64::INFINITY,
                };
                if res > compat.residual {
                    compat.residual = res;
                    if res > tol && compat.witness.is_none() {
                        compat.witness = Some(CompatibilityWitness { g: g.residue(), cover_probe: i, base_probe: j });
                    }
                }
            }
        }
    }

    let c_max = [
        condition_c.cover_a.max(),
        condition_c.cover_b.max(),
        condition_c.base_to_multiplier.max(),
        condition_c.cover_to_total.max(),
        condition_c.square_residual,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let groups_match = sa.group() == sb.group();
    let verdict = FiberVerdict {
        a: condition_a.passed(),
        b: condition_b.size > 0
            && condition_b.sum_of_squares_residual <= tol
            && condition_b.self_adjoint_residual <= tol,
        c: c_max <= tol,
        d: condition_d.spanning_residual <= tol,
        e: groups_match && compat.residual <= tol,
    };
    let mut metadata = Metadata::new();
    metadata.insert("tol".to_string(), tol.into());
    metadata.insert("group_order".to_string(), sa.group().order().into());
    metadata.insert("groups_match".to_string(), groups_match.into());
    metadata.insert(
        "multiplier_algebra".to_string(),
        "all carriers are unital, so M(B) = B and the inclusion of A lands in B".into(),
    );
    metadata.insert("partition".to_string(), "finite; sigma-unitality is automatic".into());
    FiberReport { condition_a, condition_b, condition_c, condition_d, condition_e: compat, verdict, metadata }
}

/// Least-squares test that `{φ(ã_i) ι_B(b) : i, b ∈ basis(B)}` spans `B̃`.
fn density<Q: FiberQuadruple>(quad: &Q) -> DensityCheck {
    let sb = quad.cover_b();
    let (alg_b, base_b) = (sb.algebra(), sb.base());
    let dim = alg_b.dimension();
    let mut columns = Vec::new();
    for f in &quad.cover_a().frame {
        let phi = quad.cover_to_total(f);
        for b in base_b.basis() {
            match alg_b.mul(&phi, &sb.embed(&b)) {
                Ok(col) => columns.push(alg_b.coords(&col)),
                Err(_) => {
                    return DensityCheck {
                        columns: 0,
                        targets: 0,
                        rank: 0,
                        dimension: dim,
                        spanning_residual: f64::INFINITY,
                    }
                }
            }
        }
    }
    let targets = alg_b.probes();
    let a = DMatrix::from_fn(dim, columns.len(), |i, j| columns[j][i]);
    let t_coords: Vec<Vec<Complex64>> = targets.iter().map(|t| alg_b.coords(t)).collect();
    let t = DMatrix::from_fn(dim, targets.len(), |i, j| t_coords[j][i]);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let eps = smax * 1e-10 * (dim.max(columns.len()) as f64);
    let rank = svd.singular_values.iter().filter(|&&s| s > eps).count();
    let residual = match svd.solve(&t, eps) {
        Ok(x) => {
            let fit = &a * x;
            (0..targets.len())
                .map(|j| {
                    let c: Vec<Complex64> = fit.column(j).iter().copied().collect();
                    alg_b.distance(&alg_b.from_coords(&c), &targets[j])
                })
                .fold(0.0, f64::max)
        }
        Err(_) => f64::INFINITY,
    };
    DensityCheck { columns: columns.len(), targets: targets.len(), rank, dimension: dim, spanning_residual: residual }
}

/// `{φ(ã_j) ι_B(b_i)}` indexed by partition element `i` then frame element `j`,
/// with the weight of the `Ã` frame.
pub fn combine_frames<Q: FiberQuadruple>(
    quad: &Q,
    frame_a: &CoveringData<Q::CoverA>,
    partition: &[BaseElem<Q::CoverB>],
) -> Result<CoveringData<Q::CoverB>>
where
    Q::CoverB: Clone,
{
    let sb = quad.cover_b();
    let (alg_b, base_b) = (sb.algebra(), sb.base());
    if partition.is_empty() {
        return Err(Error::InvalidParameter("empty partition".into()));
    }
    let mut sum = base_b.zero();
    for b in partition {
        sum = base_b.add(&sum, &base_b.mul(b, b)?);
    }
    let residual = base_b.distance(&sum, &base_b.one());
    if !(residual <= PARTITION_TOLERANCE) {
        return Err(Error::PartitionCondition { residual });
    }
    let fr = verify_frame(frame_a, FRAME_TOLERANCE);
    if let Some(e) = fr.failure {
        return Err(e);
    }
    if !fr.pass {
        let residual = fr.condition.trivial_g_residual.max(fr.condition.max_nontrivial_g_residual);
        return Err(Error::FrameCondition { residual });
    }
    let mut frame = Vec::with_capacity(partition.len() * frame_a.frame.len());
    for b in partition {
        let ib = sb.embed(b);
        for f in &frame_a.frame {
            frame.push(alg_b.mul(&quad.cover_to_total(f), &ib)?);
        }
    }
    CoveringData::new(sb.clone(), frame, frame_a.frame_weight)
}

/// A cover structure with the action replaced by the identity.
#[derive(Debug, Clone)]
pub struct Untwisted<S>(pub S);

impl<S: GroupAction> GroupAction for Untwisted<S> {
    type Algebra = S::Algebra;

    fn group(&self) -> CyclicGroup {
        self.0.group()
    }

    fn algebra(&self) -> &S::Algebra {
        self.0.algebra()
    }

    fn apply(&self, _g: GroupElement, a: &CoverElem<S>) -> CoverElem<S> {
        a.clone()
    }
}

impl<S: CoverStructure> CoverStructure for Untwisted<S> {
    type Base = S::Base;

    fn base(&self) -> &S::Base {
        self.0.base()
    }

    fn embed(&self, a: &BaseElem<S>) -> CoverElem<S> {
        self.0.embed(a)
    }

    fn retract(&self, a: &CoverElem<S>) -> BaseElem<S> {
        self.0.retract(a)
    }
}

/// The topological fiber product of a sampled cover `X̃ → X` and a surjection `Y → X`.
#[derive(Debug, Clone)]
pub struct SampledFiberQuadruple<B = SampledCover> {
    pub cover_x: CoveringData<SampledCover>,
    pub y_projection: Vec<usize>,
    pub product: FiberProduct,
    pub cover_b: B,
    pub partition: Vec<SampledFunction>,
}

impl SampledFiberQuadruple {
    pub fn new(cover_x: CoveringData<SampledCover>, y_projection: Vec<usize>, partition: Vec<SampledFunction>) -> Result<Self> {
        let product = build_fiber_product(&cover_x, &y_projection)?;
        if partition.iter().any(|b| b.len() != y_projection.len()) {
            return Err(Error::CarrierMismatch("partition element on Y"));
        }
        let cover_b = product.cover.clone();
        Ok(SampledFiberQuadruple { cover_x, y_projection, product, cover_b, partition })
    }

    /// The same quadruple with the action on `Ỹ` replaced by the identity.
    pub fn untwisted(self) -> SampledFiberQuadruple<Untwisted<SampledCover>> {
        SampledFiberQuadruple {
            cover_b: Untwisted(self.cover_b),
            cover_x: self.cover_x,
            y_projection: self.y_projection,
            product: self.product,
            partition: self.partition,
        }
    }
}

impl<B> FiberQuadruple for SampledFiberQuadruple<B>
where
    B: CoverStructure<Algebra = SampledAlgebra, Base = SampledAlgebra>,
{
    type CoverA = SampledCover;
    type CoverB = B;

    fn cover_a(&self) -> &CoveringData<SampledCover> {
        &self.cover_x
    }

    fn cover_b(&self) -> &B {
        &self.cover_b
    }

    fn partition_b(&self) -> &[SampledFunction] {
        &self.partition
    }

    fn base_to_multiplier(&self, a: &SampledFunction) -> SampledFunction {
        SampledFunction::new(self.y_projection.iter().map(|&x| a.values[x]).collect())
    }

    fn cover_to_total(&self, a: &SampledFunction) -> SampledFunction {
        SampledFunction::new(self.product.pairs.iter().map(|&(xt, _)| a.values[xt]).collect())
    }
}

/// `Y = ` the `m`-fold wrap of an `N`-point circle grid: `y ↦ y mod N`.
pub fn circle_wrap(m: usize, base_points: usize) -> Vec<usize> {
    (0..m * base_points).map(|y| y % base_points).collect()
}

/// Three-element partition `b_k(t) = sqrt((1 + cos(t − 2πk/3))/3)` on an `M`-point circle grid.
pub fn three_arc_partition(points: usize) -> Vec<SampledFunction> {
    (0..3)
        .map(|k| {
            SampledFunction::from_real((0..points).map(|y| {
                let t = TAU * y as f64 / points as f64 - TAU * k as f64 / 3.0;
                Float::sqrt(Float::max((1.0 + Float::cos(t)) / 3.0, 0.0))
            }))
        })
        .collect()
}

/// The cyclic extension `A = C(σ(U)) ⊂ A[w]` fibred with `M_q ⊂ ⊕_l M_q`.
///
/// `Ã = C(σ(w̃))` carries the points `ω_n^l w_j`, indexed `t = lq + j`,
/// rotated by `Z_n`; `B = M_q` contains `A` as the functions of the clock `U`,
/// and `B̃` is the block model of [`TorusExtension`]. The frame of `Ã` is
/// `{z^j}_{j<n}` with weight `1/n`, the partition of `B` is `{1}`.
#[derive(Debug, Clone)]
pub struct CyclicExtensionQuadruple {
    pub n: usize,
    pub q: usize,
    pub spectrum: Vec<Complex64>,
    pub cover_a: CoveringData<SampledCover>,
    pub cover_b: TorusExtension,
    pub partition: Vec<CMatrix>,
}

impl CyclicExtensionQuadruple {
    pub fn new(pair: &TorusPair, n: usize, mu: &BorelRootMap) -> Result<Self> {
        let cover = cyclic_cover_torus(pair, n, mu)?;
        let q = pair.q;
        let w = cover.w.matrix();
        if (0..q).any(|i| (0..q).any(|j| i != j && w[(i, j)] != Complex64::new(0.0, 0.0))) {
            return Err(Error::InvalidParameter("cyclic extension quadruple needs a diagonal root".into()));
        }
        let spectrum: Vec<Complex64> =
            (0..n * q).map(|t| root_of_unity((t / q) as i64, n) * w[(t % q, t % q)]).collect();
        let structure = circle_sampled_cover(n, q)?;
        let frame =
            (0..n as i32).map(|j| SampledFunction::new(spectrum.iter().map(|z| z.powi(j)).collect())).collect();
        let cover_a = CoveringData::new(structure, frame, 1.0 / n as f64)?;
        let cover_b = TorusExtension::new(&UnitaryMatrix::new(w.clone())?, n)?;
        Ok(CyclicExtensionQuadruple { n, q, spectrum, cover_a, cover_b, partition: vec![CMatrix::identity(q, q)] })
    }

    /// Decomposition of an element of `B̃` over `B` along `w̃`.
    pub fn decompose(&self, a: &BlockMatrix) -> Result<CyclicDecomposition<CMatrix>> {
        cyclic_decompose_with(&self.cover_b, self.cover_b.generator(), a)
    }
}

impl FiberQuadruple for CyclicExtensionQuadruple {
    type CoverA = SampledCover;
    type CoverB = TorusExtension;

    fn cover_a(&self) -> &CoveringData<SampledCover> {
        &self.cover_a
    }

    fn cover_b(&self) -> &TorusExtension {
        &self.cover_b
    }

    fn partition_b(&self) -> &[CMatrix] {
        &self.partition
    }

    fn base_to_multiplier(&self, a: &SampledFunction) -> CMatrix {
        let zero = Complex64::new(0.0, 0.0);
        CMatrix::from_fn(self.q, self.q, |i, j| if i == j { a.values[i] } else { zero })
    }

    fn cover_to_total(&self, a: &SampledFunction) -> BlockMatrix {
        let zero = Complex64::new(0.0, 0.0);
        let q = self.q;
        BlockMatrix {
            blocks: (0..self.n)
                .map(|l| CMatrix::from_fn(q, q, |i, j| if i == j { a.values[l * q + i] } else { zero }))
                .collect(),
        }
    }
}
