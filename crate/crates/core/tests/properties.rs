use std::f64::consts::TAU;

use nccover::algebra::{op_norm, random_coords};
use nccover::calculus::{
    apply_borel, branch_analysis, unitarity_residual, winding_number, BorelRootMap, TwistArc, UnitaryMatrix,
    UNITARY_TOLERANCE,
};
use nccover::circle::{build_partition, sampled_partition, CircleCover, CircleDeckAction, CirclePoly};
use nccover::fiber::{build_fiber_product, combine_frames, cyclic_decompose, SampledFiberQuadruple};
use nccover::groups::{conditional_expectation, is_invariant, nondegeneracy_witness};
use nccover::hilbert::{inner, rank_one_apply, reconstruction_residual, ModuleVector, RankOneOperator};
use nccover::sampled::circle_sampled_cover;
use nccover::torus::{clock_shift, cyclic_cover_torus, TorusExtension};
use nccover::verifier::{frame_sums, full_report, verify_frame, GRID_TOLERANCE};
use nccover::{Complex64, CoveringData, GroupAction, SampledFunction, StarAlgebra};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn poly(support: usize, bound: usize, seed: u64) -> CirclePoly {
    CirclePoly::from_coeffs(support, random_coords(2 * support + 1, seed)).unwrap().with_bound(bound).unwrap()
}

/// Random element of each carrier, through its coordinates.
fn random_elem<A: StarAlgebra>(alg: &A, seed: u64) -> A::Elem {
    alg.from_coords(&random_coords(alg.dimension(), seed))
}

fn action_laws<S: GroupAction>(action: &S, seed: u64) -> Result<(), TestCaseError> {
    let alg = action.algebra();
    let a = random_elem(alg, seed);
    for g in action.group().elements() {
        let lhs = action.act(g, &alg.adjoint(&a)).unwrap();
        let rhs = alg.adjoint(&action.act(g, &a).unwrap());
        prop_assert!(alg.distance(&lhs, &rhs) <= 1e-12, "involutivity at g = {}", g.residue());
    }
    let e = conditional_expectation(&a, action).unwrap();
    let ee = conditional_expectation(&e, action).unwrap();
    prop_assert!(alg.distance(&ee, &e) <= 1e-10);
    prop_assert!(is_invariant(&e, action, 1e-10).unwrap());
    for g in action.group().elements().skip(1) {
        prop_assert!(nondegeneracy_witness(action, g).is_some(), "g = {} acts trivially", g.residue());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn circle_deck_action_laws(n in 1usize..6, seed in any::<u64>()) {
        action_laws(&CircleDeckAction::new(n, 16).unwrap(), seed)?;
    }

    #[test]
    fn sampled_cover_action_laws(n in 1usize..5, points in 1usize..12, seed in any::<u64>()) {
        action_laws(&circle_sampled_cover(n, points).unwrap(), seed)?;
    }

    #[test]
    fn block_extension_action_laws(n in 1usize..5, q in 1usize..4, seed in any::<u64>()) {
        let w = UnitaryMatrix::random(q, seed);
        action_laws(&TorusExtension::new(&w, n).unwrap(), seed ^ 1)?;
    }

    #[test]
    fn embed_base_is_multiplicative(n in 1usize..5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let (a, b) = (poly(3, 3, s1), poly(3, 3, s2));
        let ab = a.multiply_into(&b, 6).unwrap();
        let lhs = ab.embed_base(n, 6 * n).unwrap();
        let rhs = a.embed_base(n, 3 * n).unwrap().multiply_into(&b.embed_base(n, 3 * n).unwrap(), 6 * n).unwrap();
        prop_assert!(lhs.max_coeff_distance(&rhs) <= 1e-12);
    }

    #[test]
    fn invariance_iff_coefficients_sieve(
        n in 2usize..6,
        terms in proptest::collection::vec((-12i64..=12, -1.0f64..1.0, -1.0f64..1.0), 1..6),
    ) {
        let deck = CircleDeckAction::new(n, 12).unwrap();
        let mut a = CirclePoly::zero(12);
        for &(m, re, im) in &terms {
            a.set(m, c(re, im)).unwrap();
        }
        let sieved = CirclePoly::from_terms(
            12,
            &a.terms().filter(|(m, _)| m.rem_euclid(n as i64) == 0).collect::<Vec<_>>(),
        ).unwrap();
        prop_assert!(is_invariant(&sieved, &deck, 1e-10).unwrap());
        let has_stray = a.terms().any(|(m, z)| m.rem_euclid(n as i64) != 0 && z.norm() > 1e-3);
        prop_assert_eq!(is_invariant(&a, &deck, 1e-10).unwrap(), !has_stray);
    }

    #[test]
    fn rotation_is_isometric(seed in any::<u64>(), k in -8192i64..8192) {
        let a = poly(8, 8, seed);
        let grid = 4096;
        let s = TAU * k as f64 / grid as f64;
        let d = (a.rotate(s).sup_norm(grid).unwrap() - a.sup_norm(grid).unwrap()).abs();
        prop_assert!(d <= 1e-9);
        let shifted = (0..grid).map(|j| {
            let phi = TAU * j as f64 / grid as f64;
            (a.rotate(s).eval(phi) - a.eval(phi + s)).norm()
        });
        prop_assert!(shifted.fold(0.0, f64::max) <= 1e-9);
    }

    #[test]
    fn hilbert_module_laws(n in 1usize..5, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let cov = CircleCover::new(n, 64).unwrap().monomial_covering().unwrap();
        let alg = cov.structure.algebra();
        let deck = cov.structure.deck();
        let a = ModuleVector::new(poly(6, 64, s1), &cov).unwrap();
        let b = ModuleVector::new(poly(6, 64, s2), &cov).unwrap();
        let base_c = poly(2, 64 / n, s3);
        let ab = inner(&a, &b).unwrap();
        prop_assert!(is_invariant(&ab, deck, 1e-10).unwrap());

        let lhs = inner(&a, &b.right_mul(&base_c).unwrap()).unwrap();
        let rhs = alg.mul(&ab, &base_c.embed_base(n, 64).unwrap()).unwrap();
        prop_assert!(alg.distance(&lhs, &rhs) <= 1e-10);

        let aa = inner(&a, &a).unwrap();
        for z in aa.sample(512) {
            prop_assert!(z.re >= -1e-10 && z.im.abs() <= 1e-10);
        }

        let eta = ModuleVector::new(poly(4, 64, s3 ^ 7), &cov).unwrap();
        let op = RankOneOperator::new(a.clone(), b.clone()).unwrap();
        let lhs = rank_one_apply(&op, &eta.right_mul(&base_c).unwrap()).unwrap();
        let rhs = rank_one_apply(&op, &eta).unwrap().right_mul(&base_c).unwrap();
        prop_assert!(alg.distance(&lhs.value, &rhs.value) <= 1e-10);
    }

    #[test]
    fn monomial_frame_reconstructs(n in 1usize..6, seed in any::<u64>()) {
        let cov = CircleCover::new(n, 32).unwrap().monomial_covering().unwrap();
        prop_assert!(reconstruction_residual(&cov, &poly(20, 32, seed)).unwrap() <= 1e-7);
    }

    #[test]
    fn cyclic_decomposition_reassembles(n in 1usize..6, seed in any::<u64>()) {
        let a = poly(20, 20, seed);
        let d = cyclic_decompose(&a, n).unwrap();
        prop_assert!(d.residual <= 1e-12);
        for aj in &d.coefficients {
            let bound = aj.degree_bound() * n;
            let lifted = aj.embed_base(n, bound).unwrap();
            prop_assert!(is_invariant(&lifted, &CircleDeckAction::new(n, bound).unwrap(), 1e-10).unwrap());
        }
    }

    #[test]
    fn borel_roots_are_roots(dim in 1usize..17, n in 1usize..5, seed in any::<u64>(), cut in 0.1f64..6.1, k in 0usize..4) {
        let u = UnitaryMatrix::random(dim, seed);
        let q = UnitaryMatrix::random(dim, seed ^ 0x5555);
        let twisted = BorelRootMap::with_twist(n, vec![TwistArc { end: cut, k: 0 }, TwistArc { end: TAU, k: k % n }]).unwrap();
        for mu in [BorelRootMap::standard(n).unwrap(), twisted] {
            let root = mu.apply(&u).unwrap();
            prop_assert!(op_norm(&(root.pow(n as u32) - u.matrix())) <= 1e-9);
            prop_assert!(unitarity_residual(&root) <= UNITARY_TOLERANCE);
        }
        let f = |z: Complex64| z * z.conj().powu(3);
        let fu = apply_borel(&u, f).unwrap();
        prop_assert!(unitarity_residual(&fu) <= UNITARY_TOLERANCE);
        let quq = UnitaryMatrix::with_tolerance(q.matrix() * u.matrix() * q.matrix().adjoint(), 1e-9).unwrap();
        let lhs = apply_borel(&quq, f).unwrap();
        prop_assert!(op_norm(&(lhs - q.matrix() * fu * q.matrix().adjoint())) <= 1e-9);
    }

    #[test]
    fn winding_is_additive(m1 in -6i64..=6, m2 in -6i64..=6, s1 in any::<u64>(), s2 in any::<u64>()) {
        let loop_of = |m: i64, seed: u64| -> Vec<Complex64> {
            let p = poly(3, 3, seed);
            (0..1024).map(|j| {
                let phi = TAU * j as f64 / 1024.0;
                let h = 0.3 * p.eval(phi).re;
                Complex64::from_polar(1.0, m as f64 * phi + h)
            }).collect()
        };
        let (u, w) = (loop_of(m1, s1), loop_of(m2, s2));
        let uw: Vec<Complex64> = u.iter().zip(&w).map(|(a, b)| a * b).collect();
        let (wu, ww, wuw) = (winding_number(&u).unwrap(), winding_number(&w).unwrap(), winding_number(&uw).unwrap());
        prop_assert_eq!((wu.winding, ww.winding), (m1, m2));
        prop_assert_eq!(wuw.winding, m1 + m2);
    }

    #[test]
    fn roots_of_loops_are_not_loops_unless_divisible(m in -8i64..=8, n in 2usize..5) {
        let mu = BorelRootMap::standard(n).unwrap();
        let grid = 2048;
        let v: Vec<Complex64> = (0..grid).map(|j| mu.eval_angle(m as f64 * TAU * j as f64 / grid as f64)).collect();
        let b = branch_analysis(&v, 0.5).unwrap();
        prop_assert!((b.continuous_turns - m as f64 / n as f64).abs() <= 1e-9);
        if m.rem_euclid(n as i64) == 0 {
            prop_assert!(b.fractional_defect <= 1e-9);
        } else {
            prop_assert!(b.fractional_defect >= 1.0 / n as f64 - 1e-9);
            prop_assert!(!b.jumps.is_empty());
        }
    }

    #[test]
    fn torus_covers(q in 1usize..8, raw in -20i64..20, n in 1usize..6, k in 0usize..5) {
        let p = raw.rem_euclid(q as i64);
        prop_assume!(gcd(p, q as i64) == 1);
        let pair = clock_shift(p, q).unwrap();
        prop_assert!(pair.relation_residual() <= 1e-12);
        let mu = BorelRootMap::constant_twist(n, k % n).unwrap();
        let r = cyclic_cover_torus(&pair, n, &mu).unwrap();
        prop_assert!(r.power_residual <= 1e-9);
        prop_assert!(r.phase_law_residual <= 1e-8);
        prop_assert!((n as f64 * r.theta_tilde - r.theta - r.k as f64).abs() <= 1e-8);
        prop_assert!((0..n as i64).contains(&r.k));
    }

    #[test]
    fn fiber_products_have_n_times_y_points(n in 1usize..5, base in 1usize..9, extra in proptest::collection::vec(any::<u16>(), 0..12)) {
        let cover = sampled_partition(n, base).unwrap().covering();
        let mut y: Vec<usize> = (0..base).collect();
        y.extend(extra.iter().map(|&e| e as usize % base));
        let fp = build_fiber_product(&cover, &y).unwrap();
        prop_assert_eq!(fp.pairs.len(), n * y.len());
        prop_assert!(fp.cover.is_free());
    }

    #[test]
    fn combined_frames_pass(n in 1usize..4, base in 2usize..9, wrap in 1usize..4, parts in 1usize..4, seed in any::<u64>()) {
        let cover = sampled_partition(n, base).unwrap().covering();
        let points = wrap * base;
        let weights: Vec<Vec<f64>> =
            (0..parts).map(|k| random_coords(points, seed + k as u64).iter().map(|z| z.re.abs() + 0.1).collect()).collect();
        let partition: Vec<SampledFunction> = (0..parts)
            .map(|k| SampledFunction::from_real((0..points).map(|y| {
                let total: f64 = weights.iter().map(|w| w[y]).sum();
                (weights[k][y] / total).sqrt()
            })))
            .collect();
        let y = (0..points).map(|t| t % base).collect();
        let quad = SampledFiberQuadruple::new(cover, y, partition).unwrap();
        let combined = combine_frames(&quad, &quad.cover_x, &quad.partition).unwrap();
        prop_assert!(verify_frame(&combined, 2e-8).pass);
    }

    #[test]
    fn tightening_tolerance_never_helps(n in 2usize..4, corruption in 0.0f64..1e-6, t1 in 1e-12f64..1e-5, t2 in 1e-12f64..1e-5) {
        let mut cov = build_partition(n, 64 * n).unwrap().covering();
        cov.frame[0].values[3] += c(corruption, 0.0);
        let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        let (r_lo, r_hi) = (full_report(&cov, lo, lo), full_report(&cov, hi, hi));
        prop_assert!(!r_lo.passed() || r_hi.passed());
        prop_assert!(!r_lo.verdict.b || r_hi.verdict.b);
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn partition_sheets_are_disjoint() {
    for n in 2..=4 {
        let f = build_partition(n, 256).unwrap();
        let cov = f.covering();
        let alg = cov.structure.algebra();
        for e in &f.elements {
            for g in cov.structure.group().elements().skip(1) {
                let overlap = alg.mul(e, &cov.structure.act(g, e).unwrap()).unwrap();
                assert!(alg.norm(&overlap) <= 1e-8, "n={n} g={}", g.residue());
            }
        }
    }
}

#[test]
fn constructions_pass_at_default_tolerances() {
    for n in 1..=4 {
        let cov = build_partition(n, 64 * n + 37).unwrap().covering();
        assert!(full_report(&cov, GRID_TOLERANCE, GRID_TOLERANCE).passed(), "partition n={n}");
        let mono = CircleCover::new(n, 24).unwrap().monomial_covering().unwrap();
        assert!(full_report(&mono, 1e-10, 1e-10).passed(), "monomial n={n}");
    }
}

#[test]
fn reports_are_deterministic() {
    let cov = build_partition(3, 512).unwrap().covering();
    assert_eq!(full_report(&cov, 1e-8, 1e-8), full_report(&cov, 1e-8, 1e-8));
}

/// With `x_j = w a_j`, `y_j = a_j*`, the condition `sum_j x_j g(y_j) = δ_g` is
/// the frame identity, so both hold or fail together on exact carriers.
#[test]
fn exact_frame_pass_matches_the_galois_condition() {
    let structure = circle_sampled_cover(3, 5).unwrap();
    let sheets: Vec<SampledFunction> =
        (0..3).map(|l| SampledFunction::from_real((0..15).map(|t| if t / 5 == l { 1.0 } else { 0.0 }))).collect();
    let good = CoveringData::new(structure, sheets, 1.0).unwrap();
    let mut bad = good.clone();
    bad.frame[2] = SampledFunction::from_real((0..15).map(|t| if t / 5 == 2 { 0.5 } else { 0.0 }));
    for cov in [&good, &bad] {
        let alg = cov.structure.algebra();
        let mut galois = true;
        for g in cov.structure.group().elements() {
            let mut sum = alg.zero();
            for a in &cov.frame {
                let x = alg.scale(c(cov.frame_weight, 0.0), a);
                let y = cov.structure.act(g, &alg.adjoint(a)).unwrap();
                sum = alg.add(&sum, &alg.mul(&x, &y).unwrap());
            }
            let delta = if g.is_identity() { alg.one() } else { alg.zero() };
            galois &= sum == delta;
        }
        assert_eq!(frame_sums(cov).unwrap().len(), 3);
        assert_eq!(verify_frame(cov, 0.0).pass, galois);
    }
    assert!(verify_frame(&good, 0.0).pass);
    assert!(!verify_frame(&bad, 0.0).pass);
}
