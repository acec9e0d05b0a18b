//! Acceptance gate: the ten delivery criteria, one test and one printed
//! verdict line each (run with `--nocapture` to see the lines).
//!
//! Criterion 4 is red by analysis, not by defect: the test verifies the
//! engine's honest values and prints FAIL for the criterion itself. The
//! decisions ledger holds the full argument.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use num::{BigRational, Zero};

use common::Dense;
use lichten::basis::{binomial, BasisSpec};
use lichten::engine::{
    cohomology_dims, ComplexFamily, DegreeReport, TwistKind, TwistedComplex,
};
use lichten::fixtures::{catalogue, resolve};
use lichten::form::DifferentialForm;
use lichten::lck::{exact_fixture, hat_cohomology_and_delta, lck_classes, HatComplex};
use lichten::report::{degree_sections, Report};
use lichten::scalar::Scalar;
use lichten::sparse::{SparseMat, SparseVec};
use lichten::trig::TrigPoly;
use lichten::twist::TwistData;
use lichten::verify::run_suite;

fn dims_of(
    tw: &TwistData,
    kind: TwistKind,
    degrees: &[usize],
    schedule: &[i64],
    stability: usize,
) -> BTreeMap<usize, DegreeReport> {
    let family = TwistedComplex::new(tw.clone(), kind);
    cohomology_dims(&family, degrees, schedule, stability).expect("dimension tables")
}

fn stabilized(table: &BTreeMap<usize, DegreeReport>, r: usize) -> usize {
    table[&r].stabilized_dim.unwrap_or_else(|| panic!("degree {r} did not stabilize"))
}

#[test]
fn criterion_01_identity_suites_run_exactly() {
    let start = Instant::now();
    let report = run_suite("all", 100, 7).expect("suites run");
    let elapsed = start.elapsed();
    assert_eq!(report.outcomes.len(), 21);
    for o in &report.outcomes {
        assert_eq!(o.trials, 100, "suite {}", o.name);
        assert_eq!(o.failures, 0, "suite {} failed: {:?}", o.name, o.detail);
    }
    assert!(elapsed.as_secs() < 120, "identity suites took {elapsed:.2?}");
    println!(
        "criterion 1: PASS — 21 identity suites x 100 exact trials, 0 failures, {elapsed:.2?}"
    );
}

#[test]
fn criterion_02_circle_degree0_vanishes() {
    let start = Instant::now();
    let schedule = [4, 5, 6, 7, 8];
    for name in ["circle-cos", "circle-cos-2dt"] {
        let fx = resolve(name).unwrap();
        // stability 5: all five scheduled cutoffs must agree
        let table = dims_of(fx.twist(), TwistKind::DFTheta, &[0], &schedule, 5);
        assert_eq!(stabilized(&table, 0), 0, "{name}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10);
    println!(
        "criterion 2: PASS — degree-0 group vanishes for theta = dt and 2dt over D = 4..8, {elapsed:.2?}"
    );
}

#[test]
fn criterion_03_circle_degree1_counts_zeros() {
    let start = Instant::now();
    let schedule = [4, 5, 6, 7, 8];
    for name in ["circle-cos", "circle-cos-2dt", "circle-sin"] {
        let fx = resolve(name).unwrap();
        let attached = stabilized(&dims_of(fx.twist(), TwistKind::DFTheta, &[1], &schedule, 3), 1);
        let plain = stabilized(&dims_of(fx.twist(), TwistKind::DTheta, &[1], &schedule, 3), 1);
        let zeros = fx.zero_count().expect("circle fixtures declare zeros");
        assert_eq!(attached, plain + zeros, "{name}: {attached} vs {plain} + {zeros}");
        assert_eq!(attached, 2, "{name}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30);
    println!(
        "criterion 3: PASS — degree-1 group = plain group + zero count (2 = 0 + 2) on cos and sin circles, {elapsed:.2?}"
    );
}

#[test]
fn criterion_04_nonvanishing_comparison_documented_red() {
    let fx = resolve("circle-shifted-cos").unwrap();
    let schedule = [4, 5, 6, 7, 8];
    let attached = dims_of(fx.twist(), TwistKind::DFTheta, &[0, 1], &schedule, 3);
    let plain = dims_of(fx.twist(), TwistKind::DTheta, &[0, 1], &schedule, 3);

    // degree 0 agrees
    assert_eq!(stabilized(&attached, 0), 0);
    assert_eq!(stabilized(&plain, 0), 0);

    // degree 1 does not: these are the engine's honest stabilized values
    let a1 = stabilized(&attached, 1);
    let p1 = stabilized(&plain, 1);
    assert_eq!(p1, 0);
    assert_eq!(a1, 2);
    println!(
        "criterion 4: FAIL (documented) — degree 0 agrees (0 = 0) but degree 1 gives {a1} vs {p1} \
         for f = 2 + cos(t1): multiplication by f is not invertible in the trigonometric-polynomial \
         ring (its symbol x^2 + 4x + 1 is no monomial), so the nonvanishing-function comparison \
         fails here; see the decisions ledger"
    );
}

/// Hand oracle for a constant 1-form twist `theta = sum c_j dt_j` on the
/// 2-torus: the operator decouples over Fourier modes, a mode contributes
/// iff `i*k = c`, and each contributing mode adds a full exterior algebra.
fn fourier_oracle(c: &[Scalar; 2], r: usize, d: i64) -> usize {
    let mut matches = 0;
    for k1 in -d..=d {
        for k2 in -d..=d {
            let ik1 = &Scalar::i() * &Scalar::from_int(k1);
            let ik2 = &Scalar::i() * &Scalar::from_int(k2);
            if ik1 == c[0] && ik2 == c[1] {
                matches += 1;
            }
        }
    }
    binomial(2, r) * matches
}

#[test]
fn criterion_05_constant_twists_match_fourier_oracle() {
    // f = 1, theta = 0: dims (1, 2, 1) at every cutoff, not just stabilized
    let fx = resolve("derham-t2").unwrap();
    let table = dims_of(fx.twist(), TwistKind::DFTheta, &[0, 1, 2], &[2, 3, 4, 5, 6], 3);
    for (r, want) in [(0, 1), (1, 2), (2, 1)] {
        assert!(
            table[&r].runs.iter().all(|run| run.dim == want),
            "degree {r}: {:?}",
            table[&r].runs
        );
    }

    // real constant twist: no mode matches, everything vanishes
    let fx = resolve("novikov-t2").unwrap();
    let table = dims_of(fx.twist(), TwistKind::DTheta, &[0, 1, 2], &[2, 3, 4], 3);
    let real_c = [Scalar::from_int(1), Scalar::zero()];
    for r in 0..=2 {
        for run in &table[&r].runs {
            assert_eq!(run.dim, fourier_oracle(&real_c, r, run.cutoff), "degree {r}");
            assert_eq!(run.dim, 0);
        }
    }

    // Gaussian constant twist i*dt1: exactly the mode k = (1, 0) survives
    let tw = TwistData::new(
        TrigPoly::one(2),
        DifferentialForm::dt(2, 0).unwrap().scale(&Scalar::i()),
    )
    .unwrap();
    let table = dims_of(&tw, TwistKind::DTheta, &[0, 1, 2], &[2, 3, 4], 3);
    let gauss_c = [Scalar::i(), Scalar::zero()];
    for r in 0..=2 {
        for run in &table[&r].runs {
            assert_eq!(run.dim, fourier_oracle(&gauss_c, r, run.cutoff), "degree {r}");
        }
        assert_eq!(stabilized(&table, r), binomial(2, r));
    }
    println!(
        "criterion 5: PASS — untwisted (1,2,1) at every cutoff; constant twists dt1 and i*dt1 \
         match the Fourier-mode oracle exactly"
    );
}

#[test]
fn criterion_06_relative_vanishing_and_euler_consistency() {
    let schedule = [2, 3, 4, 5, 6];

    // identity map: every relative group vanishes, including above the
    // degree bound max(n + 1, n') = 2
    let id = resolve("identity-relative").unwrap().relative().unwrap();
    let table = cohomology_dims(&id, &[0, 1, 2, 3], &schedule, 3).unwrap();
    for r in 0..=3 {
        assert_eq!(stabilized(&table, r), 0, "identity relative degree {r}");
    }

    // doubling map: groups (0, 0, 2), vanishing above the bound, and the
    // alternating-sum consistency of the long sequence
    let dbl = resolve("doubling-relative").unwrap().relative().unwrap();
    let rel = cohomology_dims(&dbl, &[0, 1, 2, 3], &schedule, 3).unwrap();
    let rel_dims: Vec<usize> = (0..=3).map(|r| stabilized(&rel, r)).collect();
    assert_eq!(rel_dims, [0, 0, 2, 0]);

    let src = dims_of(dbl.source(), TwistKind::DFTheta, &[0, 1], &schedule, 3);
    let tgt = dims_of(dbl.target(), TwistKind::DFTheta, &[0, 1], &schedule, 3);
    let chi = |t: &BTreeMap<usize, DegreeReport>, top: usize| -> i64 {
        (0..=top).map(|r| (if r % 2 == 0 { 1 } else { -1 }) * stabilized(t, r) as i64).sum()
    };
    let chi_rel = chi(&rel, 3);
    let chi_src = chi(&src, 1);
    let chi_tgt = chi(&tgt, 1);
    assert_eq!(stabilized(&src, 1), 4);
    assert_eq!(stabilized(&tgt, 1), 2);
    assert_eq!(chi_rel, chi_tgt - chi_src, "{chi_rel} != {chi_tgt} - ({chi_src})");
    println!(
        "criterion 6: PASS — identity cone vanishes in all degrees; doubling cone is (0,0,2) \
         with Euler sum {chi_rel} = {chi_tgt} - ({chi_src})"
    );
}

#[test]
fn criterion_07_coupled_certificates_and_dimension_identities() {
    let start = Instant::now();

    // 4-torus pair: certificates, known table, identity in every degree
    let t4 = resolve("lck-t4").unwrap().lck().unwrap();
    lck_classes(&t4).expect("4-torus class certificates");
    let degrees: Vec<usize> = (0..=5).collect();
    let hat4 = hat_cohomology_and_delta(&t4, &degrees, &[1, 2, 3], 3).unwrap();
    let dims4: Vec<usize> = (0..=5).map(|r| stabilized(&hat4.hat, r)).collect();
    assert_eq!(dims4, [1, 4, 7, 7, 4, 1]);
    for r in 0..=5 {
        assert_eq!(hat4.identity[&r], Some(true), "4-torus identity at degree {r}");
    }
    assert_eq!(hat4.delta_rank(0, 3), Some(1));
    assert_eq!(hat4.delta_rank(1, 3), Some(2));
    assert_eq!(hat4.delta_rank(2, 3), Some(1));

    // exact coupling: connecting ranks all vanish and the table is the sum
    // of the two strands
    let t2 = resolve("lck-t2-exact").unwrap().lck().unwrap();
    lck_classes(&t2).expect("2-torus class certificates");
    let degrees: Vec<usize> = (0..=3).collect();
    let hat2 = hat_cohomology_and_delta(&t2, &degrees, &[1, 2, 3, 4], 3).unwrap();
    let dims2: Vec<usize> = (0..=3).map(|r| stabilized(&hat2.hat, r)).collect();
    assert_eq!(dims2, [0, 1, 2, 1]);
    for r in 0..=3 {
        assert_eq!(hat2.identity[&r], Some(true), "2-torus identity at degree {r}");
        if let Some(rank) = hat2.delta_rank(r, 3) {
            assert_eq!(rank, 0, "connecting rank at degree {r}");
        }
        let s1 = stabilized(&hat2.strand1, r);
        let s0 = if r == 0 { 0 } else { stabilized(&hat2.strand0, r - 1) };
        assert_eq!(dims2[r], s1 + s0, "sum decomposition at degree {r}");
    }

    // zero coupling from a degenerate seed: the construction accepts it and
    // the identity still holds
    let seed = DifferentialForm::dt(2, 0).unwrap().scale(&Scalar::from_int(3));
    let zero_fx = exact_fixture(t2.twist(), &seed, BigRational::zero()).unwrap();
    assert!(zero_fx.f2_omega().is_zero());
    let hat0 = hat_cohomology_and_delta(&zero_fx, &degrees, &[1, 2, 3, 4], 3).unwrap();
    for r in 0..=3 {
        assert_eq!(hat0.identity[&r], Some(true), "zero-coupling identity at degree {r}");
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300);
    println!(
        "criterion 7: PASS — class certificates pass; coupled tables (1,4,7,7,4,1) and (0,1,2,1) \
         satisfy the rank identity in every degree; exact coupling has vanishing connecting map, \
         {elapsed:.2?}"
    );
}

fn form_from_vec(basis: &BasisSpec, v: &SparseVec) -> DifferentialForm {
    let mut acc: Option<DifferentialForm> = None;
    for (pos, c) in v {
        let term = basis.monomial(*pos).scale(c);
        acc = Some(match acc {
            Some(sum) => sum.add(&term).unwrap(),
            None => term,
        });
    }
    acc.expect("kernel vectors are nonzero")
}

#[test]
fn criterion_08_twisted_baseline_and_connecting_certificates() {
    // f = 1, theta = 0: the non-squaring operator degenerates to the plain
    // exterior derivative, so its tables equal the untwisted ones
    let tw = TwistData::untwisted(TrigPoly::one(2));
    let twisted = dims_of(&tw, TwistKind::DThetaF, &[0, 1, 2], &[2, 3, 4], 3);
    let plain = cohomology_dims(&TwistedComplex::de_rham(2), &[0, 1, 2], &[2, 3, 4], 3).unwrap();
    for r in 0..=2 {
        let a: Vec<usize> = twisted[&r].runs.iter().map(|run| run.dim).collect();
        let b: Vec<usize> = plain[&r].runs.iter().map(|run| run.dim).collect();
        assert_eq!(a, b, "degree {r}");
        assert_eq!(stabilized(&twisted, r), binomial(2, r));
    }

    // engine-found closed forms, certified through the connecting
    // construction; the 3-torus batch keeps the certificate non-vacuous
    // (its image is a 2-form with room for a nonzero derivative above it)
    let mut certified = 0;
    let t3 = TwistData::new(
        TrigPoly::cos_lin(3, &[1, 0, 0]).unwrap(),
        DifferentialForm::dt(3, 1).unwrap(),
    )
    .unwrap();
    let circle = resolve("twisted-circle").unwrap();
    for (tw, cutoff) in [(&t3, 2i64), (circle.twist(), 8i64)] {
        let family = TwistedComplex::new(tw.clone(), TwistKind::DThetaF);
        let mat = family.matrix(1, cutoff).unwrap();
        let basis = BasisSpec::new(tw.dim(), 1, cutoff);
        for v in mat.kernel_basis() {
            let phi = form_from_vec(&basis, &v);
            // the constructor errors unless phi is closed and both induced
            // images carry their closedness certificates
            let images = lichten::constructions::twisted_homs(tw, &phi).unwrap();
            // re-check the connecting certificate directly
            assert!(tw.d_f(&images.c_image).unwrap().is_zero());
            certified += 1;
        }
    }
    assert!(certified >= 20, "only {certified} closed forms found");

    // dense cross-check of the quotient arithmetic at D = 2 on the circle
    let tw = circle.twist();
    let family = TwistedComplex::new(tw.clone(), TwistKind::DThetaF);
    let step = family.step();
    let out = family.matrix(1, 2).unwrap();
    let inc = family.matrix(0, 2 - step).unwrap();
    let kernel = out.kernel_basis();
    assert_eq!(Dense::from_sparse(&out).kernel_dim(), kernel.len());
    let kmat = SparseMat::from_columns(out.cols(), kernel.clone());
    assert_eq!(Dense::from_sparse(&kmat).rank(), kernel.len());
    let joint = SparseMat::hstack(&[&inc, &kmat]);
    let inc_rank = Dense::from_sparse(&inc).rank();
    let meet = inc_rank + kernel.len() - Dense::from_sparse(&joint).rank();
    let dense_dim = kernel.len() - meet;
    let table = dims_of(tw, TwistKind::DThetaF, &[1], &[2, 3, 4], 3);
    let sparse_run = &table[&1].runs[0];
    assert_eq!(sparse_run.dim, dense_dim);
    assert_eq!(sparse_run.incoming_rank, meet);
    assert_eq!(stabilized(&table, 1), 2);

    println!(
        "criterion 8: PASS — non-squaring tables equal untwisted ones for f = 1, theta = 0; \
         {certified} engine-found closed forms certified; dense quotient arithmetic at D = 2 \
         matches the sparse path"
    );
}

#[test]
fn criterion_09_dense_oracle_agreement() {
    let mut checked = 0;
    let mut check = |what: String, m: &SparseMat| {
        // cubic dense elimination: keep matrices at desk size
        if m.cols() > 600 || m.rows() > 3000 {
            return false;
        }
        assert_eq!(Dense::from_sparse(m).rank(), m.rank(), "{what}");
        assert_eq!(Dense::from_sparse(m).kernel_dim(), m.kernel_dim(), "{what}");
        checked += 1;
        true
    };

    for spec in catalogue() {
        let fx = resolve(spec.name).unwrap();
        let tw = fx.twist();
        // the 4-torus at D = 2 is beyond cubic dense elimination; D = 1
        // keeps every strand matrix under the cap
        let level = if spec.dim <= 2 { 2 } else { 1 };

        let attached = TwistedComplex::new(tw.clone(), TwistKind::DFTheta);
        for r in 0..=spec.dim {
            check(
                format!("{} attached degree {r} at D = {level}", spec.name),
                &attached.matrix(r, level).unwrap(),
            );
        }
        if spec.name.starts_with("twisted") {
            let ns = TwistedComplex::new(tw.clone(), TwistKind::DThetaF);
            for r in 0..=spec.dim {
                check(
                    format!("{} non-squaring degree {r}", spec.name),
                    &ns.matrix(r, level).unwrap(),
                );
            }
        }
        if fx.map().is_some() {
            let rel = fx.relative().unwrap();
            for r in 0..=spec.dim + 1 {
                check(
                    format!("{} cone degree {r}", spec.name),
                    &rel.matrix(r, level).unwrap(),
                );
            }
        }
        if spec.omega.is_some() {
            let hat = HatComplex::new(&fx.lck().unwrap());
            for r in 0..=spec.dim + 1 {
                check(
                    format!("{} coupled degree {r}", spec.name),
                    &hat.matrix(r, level).unwrap(),
                );
            }
        }
    }
    assert!(checked >= 40, "only {checked} matrices cross-checked");
    println!(
        "criterion 9: PASS — dense elimination reproduces rank and kernel of {checked} operator \
         matrices across all {} fixtures (4-torus at D = 1, rest at D = 2)",
        catalogue().len()
    );
}

#[test]
fn criterion_10_fixed_seed_byte_identical_reports() {
    let verify_bytes = || {
        let vr = run_suite("gauge", 25, 99).unwrap();
        serde_json::to_string(&vr).unwrap()
    };
    assert_eq!(verify_bytes(), verify_bytes());

    let report_bytes = || {
        let fx = resolve("circle-cos").unwrap();
        let table = dims_of(fx.twist(), TwistKind::DFTheta, &[0, 1], &[4, 5, 6], 3);
        let mut rep = Report::new("cohomology");
        rep.fixture = Some(fx.name().to_string());
        rep.seed = Some(7);
        rep.param("model", "t1");
        rep.degrees = degree_sections("H", &table);
        rep.to_toml().unwrap()
    };
    let a = report_bytes();
    assert_eq!(a, report_bytes());
    assert!(!a.is_empty());
    println!("criterion 10: PASS — fixed-seed suite runs and report pipelines are byte-identical");
}
