use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vvaf::expsum::exp_sum;
use vvaf::growth::AlphaChoice;
use vvaf::lfunc::{completed_l, completed_truncated, dirichlet_l, Quadrature};
use vvaf::moebius::{self, word_decompose};
use vvaf::qseries::builtin::delta_coefficients;
use vvaf::repr::{self, frobenius};
use vvaf::{GroupElement, Representation, Subgroup, Vvaf};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn primes(n: usize) -> Vec<usize> {
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if sieve[p] {
            out.push(p);
            (p * p..=n).step_by(p).for_each(|k| sieve[k] = false);
        }
    }
    out
}

#[test]
fn delta_l_value_matches_euler_product() {
    let tau = delta_coefficients(2001);
    let s = c(13.0, 0.5);
    let mut euler = c(1.0, 0.0);
    for p in primes(2000) {
        let pf = c(p as f64, 0.0);
        let local = c(1.0, 0.0) - tau[p] as f64 * pf.powc(-s) + pf.powc(c(11.0, 0.0) - 2.0 * s);
        euler /= local;
    }
    let d = Vvaf::builtin("delta", 2001).unwrap();
    let l = dirichlet_l(&d, s, 2000, AlphaChoice::new(&d, 0.0)).unwrap();
    assert!((l.value[0] - euler).norm() < 1e-12, "{} vs {euler}", l.value[0]);
}

#[test]
fn completed_delta_is_symmetric_about_six() {
    let d = Vvaf::builtin("delta", 2001).unwrap();
    let q = Quadrature::default();
    for s in [c(7.5, 0.0), c(8.0, 1.0)] {
        let right = completed_truncated(&d, s, 2000, AlphaChoice::new(&d, 0.0)).unwrap();
        let left = completed_l(&d, c(12.0, 0.0) - s, 1.0, &q).unwrap();
        // sharp cutoff inside the half-plane: the gap must sit under the rigorous tail bound
        assert!(right.rigorous);
        let gap = (right.value[0] - left.value[0]).norm();
        assert!(gap <= right.error + 1e-12, "{s}: gap {gap:e}, bound {:e}", right.error);
    }
}

#[test]
fn expsum_at_zero_is_coefficient_sum() {
    let d = Vvaf::builtin("delta", 60).unwrap();
    let tau = delta_coefficients(60);
    let sums = exp_sum(&d, num_rational::Ratio::from_integer(0), 50).unwrap();
    let direct: i128 = tau[1..50].iter().sum();
    assert!((sums[0] - c(direct as f64, 0.0)).norm() < 1e-6 * (direct as f64).abs().max(1.0), "{} vs {direct}", sums[0]);
}

#[test]
fn representation_json_round_trip() {
    for rep in [repr::theta_eta(), repr::sym2(), repr::nonpoly(c(0.3, 1.7)).unwrap(), repr::trivial().restrict(Subgroup::Gamma0(5))] {
        let text = serde_json::to_string(&rep).unwrap();
        let back: Representation = serde_json::from_str(&text).unwrap();
        assert_eq!(back.mat_s(), rep.mat_s());
        assert_eq!(back.mat_t(), rep.mat_t());
        assert_eq!(back.group().name(), rep.group().name());
    }
}

#[test]
fn form_bundle_survives_round_trip_with_values() {
    let x = Vvaf::builtin("sym2-log", 30).unwrap();
    let y = Vvaf::from_json(&x.to_json().unwrap()).unwrap();
    let tau = c(0.2, 1.1);
    let (a, b) = (x.evaluate(tau).unwrap(), y.evaluate(tau).unwrap());
    for (u, v) in a.value.iter().zip(&b.value) {
        assert_eq!(u, v);
    }
    assert_eq!(x.flags(), y.flags());
}

#[test]
fn induced_representation_restricts_consistently() {
    let h = Subgroup::Gamma0(3);
    let reps = moebius::left_transversal(&h).unwrap();
    assert_eq!(reps.len(), 4);
    let ind = repr::theta_eta().restrict(h).induce(&reps).unwrap();
    assert_eq!(ind.dim(), 12);
    assert!(ind.validate().pass);
    assert!(ind.is_polynomial_growth().unwrap());
}

#[test]
fn theta_eta_transforms_under_random_elements() {
    let x = Vvaf::builtin("theta-eta", 80).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let taus = [c(0.1, 1.2), c(-0.3, 0.9)];
    for _ in 0..20 {
        let g = moebius::random_element(&mut rng, 6);
        // keep image points high enough for the truncated series
        let low = taus.iter().any(|&t| {
            let z = g.apply(t.into()).finite().unwrap();
            z.im < 0.3
        });
        if low {
            continue;
        }
        let chk = x.check_transformation(&g, &taus).unwrap();
        assert!(chk.residual < 1e-8, "{g:?}: {}", chk.residual);
    }
}

fn element() -> impl Strategy<Value = GroupElement> {
    any::<u64>().prop_map(|seed| moebius::random_element(&mut ChaCha8Rng::seed_from_u64(seed), 200))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn representation_is_a_homomorphism(g in element(), h in element()) {
        for rep in [repr::theta_eta(), repr::sym2()] {
            let lhs = rep.evaluate(&g.mul(&h)).unwrap();
            let rhs = rep.evaluate(&g).unwrap() * rep.evaluate(&h).unwrap();
            let scale = frobenius(&rep.evaluate(&g).unwrap()) * frobenius(&rep.evaluate(&h).unwrap());
            prop_assert!(frobenius(&(lhs - rhs)) <= 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn words_evaluate_like_the_representation(g in element()) {
        let rep = repr::theta_eta();
        let w = word_decompose(&g);
        let a = rep.evaluate_word(&w);
        let b = rep.evaluate(&g).unwrap();
        // ρ(-1) = ρ(s²) = 1 for theta-eta, so the sign ambiguity is harmless
        prop_assert!(frobenius(&(a - b)) < 1e-9);
    }
}
