//! Independent oracles for the search layer: a naive interval-box scan
//! that re-derives the dominated-square lists, rank monotonicity under
//! adding a square, certificate determinism across runs and modes, and
//! the small-integer baseline where no non-rational square can interfere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use biquadratic::arith::{classical_square_rank, ratio};
use biquadratic::embed::refine_embedding;
use biquadratic::*;

fn ring(p: i64, q: i64) -> Ring {
    Ring::new(FieldSpec::new(p, q).unwrap()).unwrap()
}

/// Rational upper bound on sqrt(x) for x >= 0.
fn sqrt_upper(x: &BigRational) -> BigRational {
    assert!(!x.is_negative());
    let scaled = x.numer() * x.denom();
    BigRational::new(scaled.sqrt() + 1, x.denom().clone())
}

/// The naive complete scan: coordinate box from embedding-interval bounds
/// via the dual-basis pairing b_i = Tr(phi_i beta), outer-rounded, then the
/// exact domination filter. This is the interval-arithmetic route the
/// ellipsoid enumeration replaced; the two must agree exactly.
fn naive_dominated_squares(ring: &Ring, target: &IntegralElement) -> Vec<[BigInt; 4]> {
    let tf = ring.from_integral(target);
    let width = ratio(1, 1024);
    // upper bounds on sqrt(sigma_j(target))
    let u: Vec<BigRational> = (1..=4)
        .map(|j| {
            let iv = refine_embedding(&tf, j, &width);
            assert!(!iv.hi.is_negative());
            sqrt_upper(&iv.hi)
        })
        .collect();
    // |b_i| <= sum_j |sigma_j(phi_i)| * u_j, outer-rounded
    let mut bounds = [0i64; 4];
    for (i, phi) in ring.codifferent().elements.iter().enumerate() {
        let mut acc = BigRational::zero();
        for (j, uj) in u.iter().enumerate() {
            let iv = refine_embedding(phi, (j + 1) as u8, &width);
            let mag = iv.lo.abs().max(iv.hi.abs());
            acc += mag * uj;
        }
        bounds[i] = acc.ceil().to_integer().try_into().expect("small box");
    }
    let mut out = Vec::new();
    for b1 in -bounds[0]..=bounds[0] {
        for b2 in -bounds[1]..=bounds[1] {
            for b3 in -bounds[2]..=bounds[2] {
                for b4 in -bounds[3]..=bounds[3] {
                    let cand = ring.integral_from_i64([b1, b2, b3, b4]);
                    if cand.is_zero() || !cand.is_canonical_sign() {
                        continue;
                    }
                    let f = ring.from_integral(&cand);
                    let sq = f.try_mul(&f).unwrap();
                    if tf.dominates(&sq).unwrap() {
                        out.push(cand.coords);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

#[test]
fn dominated_squares_match_naive_box_scan() {
    let cases: Vec<(Ring, IntegralElement)> = vec![
        {
            let r = ring(10, 35);
            let t = r.integral_from_i64([7, 0, 0, 0]);
            (r, t)
        },
        {
            let r = ring(10, 35);
            let t = r.integral_from_i64([12, 0, 0, 0]);
            (r, t)
        },
        {
            let r = ring(30, 35);
            let t = r
                .to_integral(&parse_element(r.spec(), "44 + 1*s30 + 0*s35 + 1*s42").unwrap())
                .unwrap();
            (r, t)
        },
        {
            let r = ring(143, 165);
            let t = r.integral_from_i64([30, 0, 0, 0]);
            (r, t)
        },
    ];
    for (ring, target) in cases {
        let mut fast: Vec<[BigInt; 4]> = enumerate_dominated_squares(&ring, &target)
            .unwrap()
            .into_iter()
            .map(|c| c.beta.coords)
            .collect();
        fast.sort();
        let naive = naive_dominated_squares(&ring, &target);
        assert_eq!(
            fast,
            naive,
            "candidate sets differ for target {:?} in ({}, {})",
            target.coords,
            ring.spec().p,
            ring.spec().q
        );
        assert!(!fast.is_empty());
    }
}

#[test]
fn rank_monotone_under_adding_a_square() {
    let r = ring(10, 35);
    let budget = SearchBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for _ in 0..40 {
        // alpha: a small sum of squares; beta: a small element
        let mut alpha = r.spec().zero();
        for _ in 0..rng.gen_range(1..=3) {
            let b = r.from_integral(&r.integral_from_i64([
                rng.gen_range(-2i64..=2),
                rng.gen_range(-1i64..=1),
                0,
                rng.gen_range(-1i64..=1),
            ]));
            alpha = &alpha + &b.try_mul(&b).unwrap();
        }
        let beta = r.from_integral(&r.integral_from_i64([
            rng.gen_range(-2i64..=2),
            rng.gen_range(-1i64..=1),
            0,
            rng.gen_range(-1i64..=1),
        ]));
        if alpha.is_zero() || beta.is_zero() {
            continue;
        }
        let a_int = r.to_integral(&alpha).unwrap();
        let sum_int = r
            .to_integral(&(&alpha + &beta.try_mul(&beta).unwrap()))
            .unwrap();
        let ra = sos_rank(&r, &a_int, &budget).unwrap();
        let rs = sos_rank(&r, &sum_int, &budget).unwrap();
        assert_eq!(ra.kind, CertificateKind::Exact);
        assert_eq!(rs.kind, CertificateKind::Exact);
        assert!(
            rs.rank_or_bound <= ra.rank_or_bound + 1,
            "rank({:?}) = {} but rank(+beta^2) = {}",
            a_int.coords,
            ra.rank_or_bound,
            rs.rank_or_bound
        );
        checked += 1;
    }
    assert!(checked >= 20);
}

#[test]
fn certificates_are_deterministic_across_runs_and_modes() {
    let r = ring(30, 35);
    let target = r
        .to_integral(&parse_element(r.spec(), "44 + 1*s30 + 0*s35 + 1*s42").unwrap())
        .unwrap();
    let sequential = SearchBudget::default();
    let a = certify_min_rank(&r, &target, 6, &sequential).unwrap();
    let b = certify_min_rank(&r, &target, 6, &sequential).unwrap();
    assert_eq!(a.kind, b.kind);
    assert_eq!(a.rank_or_bound, b.rank_or_bound);
    assert_eq!(a.witness, b.witness);
    assert_eq!(a.nodes_explored, b.nodes_explored);
    let parallel = SearchBudget {
        root_parallel: true,
        ..SearchBudget::default()
    };
    let c = certify_min_rank(&r, &target, 6, &parallel).unwrap();
    let d = certify_min_rank(&r, &target, 6, &parallel).unwrap();
    assert_eq!((c.kind, c.rank_or_bound), (a.kind, a.rank_or_bound));
    assert_eq!(c.witness, a.witness);
    assert_eq!(c.nodes_explored, d.nodes_explored);
    // exact searches too
    let e1 = sos_rank(&r, &target, &sequential).unwrap();
    let e2 = sos_rank(&r, &target, &sequential).unwrap();
    assert_eq!(e1.rank_or_bound, e2.rank_or_bound);
    assert_eq!(e1.witness, e2.witness);
    assert_eq!(e1.nodes_explored, e2.nodes_explored);
}

#[test]
fn exact_witnesses_sum_to_target() {
    let r = ring(30, 35);
    let budget = SearchBudget::default();
    for coords in [[6i64, 0, 0, 0], [31, 2, 0, 0], [74, 2, 2, 0]] {
        let f = r.from_integral(&r.integral_from_i64(coords));
        if !f.is_totally_positive() {
            continue;
        }
        let t = r.integral_from_i64(coords);
        if let Ok(cert) = sos_rank(&r, &t, &budget) {
            if cert.kind == CertificateKind::Exact {
                let mut acc = r.spec().zero();
                for w in cert.witness.as_ref().unwrap() {
                    let wf = r.from_integral(w);
                    acc = &acc + &wf.try_mul(&wf).unwrap();
                }
                assert_eq!(acc, f, "witness must square-sum to {coords:?}");
            }
        }
    }
}

#[test]
fn rational_baseline_holds_below_the_radicals() {
    // for m < min(p, q, r) no non-rational square is dominated by m, so
    // the ring rank equals the classical four-square rank
    let r = ring(10, 35);
    let budget = SearchBudget::default();
    for m in 1..=9u32 {
        let cert = sos_rank(&r, &r.integral_from_i64([m as i64, 0, 0, 0]), &budget).unwrap();
        assert_eq!(cert.kind, CertificateKind::Exact);
        assert_eq!(
            cert.rank_or_bound,
            classical_square_rank(m as u64),
            "m = {m}"
        );
        // and every dominated square below the radicals is rational
        let cands =
            enumerate_dominated_squares(&r, &r.integral_from_i64([m as i64, 0, 0, 0])).unwrap();
        for c in cands {
            assert!(
                r.from_integral(&c.beta).is_rational(),
                "m = {m} admits a non-rational candidate"
            );
        }
    }
}

#[test]
fn min_trace_witnesses_live_in_the_codifferent() {
    let ctx = FamilyContext::new(Family::F1, 6).unwrap();
    let labels = [
        FamilyElementLabel {
            name: ElementName::Mu,
            t: None,
        },
        FamilyElementLabel {
            name: ElementName::Alpha,
            t: Some(5),
        },
        FamilyElementLabel {
            name: ElementName::Omega,
            t: Some(4),
        },
    ];
    for label in labels {
        let e = ctx.ring.to_integral(&ctx.element(&label).unwrap()).unwrap();
        match min_codiff_trace(&ctx.ring, &e, 2).unwrap() {
            MinTraceOutcome::Found { value, witness, .. } => {
                assert!(witness.is_totally_positive());
                // integer trace against every basis element: delta is in
                // the codifferent
                for gamma in ctx.ring.basis().elements() {
                    let t = gamma.try_mul(&witness).unwrap().trace();
                    assert!(t.is_integer(), "Tr(gamma * delta) not integral for {label}");
                }
                let t = ctx
                    .ring
                    .from_integral(&e)
                    .try_mul(&witness)
                    .unwrap()
                    .trace();
                assert_eq!(t, ratio(value as i64, 1));
            }
            MinTraceOutcome::AboveCap { .. } => panic!("{label} has minTr <= 2"),
        }
    }
}
