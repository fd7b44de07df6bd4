use std::collections::HashMap;

use astro_float::{BigFloat, Consts, RoundingMode};
use num_integer::Integer;
use proptest::prelude::*;
use qmodular::forms::build;
use qmodular::numerics::{
    class_group_enumerate, class_number, eta, eval_qseries, log10_abs, match_table3_to_forms,
    pi_report, pi_series_sum, reference_pi, tau_of, term_ratio, terms_for_digits,
    verify_singular_value, verify_singular_values, x_at, BigComplex, NumericsError, QuadForm,
    SingularStatus, Surd, Tables,
};
use qmodular::series::QSeries;

const RM: RoundingMode = RoundingMode::ToEven;

fn forms(v: &[(i64, i64, i64)]) -> Vec<QuadForm> {
    v.iter()
        .map(|&(a, b, c)| QuadForm::new(a, b, c).unwrap())
        .collect()
}

#[test]
fn class_groups_of_small_discriminants() {
    assert_eq!(
        class_group_enumerate(-20).unwrap(),
        forms(&[(1, 0, 5), (2, 2, 3)])
    );
    assert_eq!(class_group_enumerate(-4).unwrap(), forms(&[(1, 0, 1)]));
    assert_eq!(class_number(-3).unwrap(), 1);
    assert!(class_group_enumerate(-21).is_err());
    assert!(class_group_enumerate(5).is_err());
}

#[test]
fn table_form_reduces_into_its_class_group() {
    let f = QuadForm::new(20, -40, 23).unwrap();
    assert_eq!(f.discriminant(), -240);
    let r = f.reduce();
    assert!(r.is_reduced());
    assert!(class_group_enumerate(-240).unwrap().contains(&r));
}

fn find(
    parent: &mut HashMap<(i64, i64, i64), (i64, i64, i64)>,
    x: (i64, i64, i64),
) -> (i64, i64, i64) {
    let p = parent[&x];
    if p == x {
        return x;
    }
    let r = find(parent, p);
    parent.insert(x, r);
    r
}

/// Connected components of primitive forms in a box under `S` and `T^{±1}`.
/// Reduction moves never leave the box, so every class meets it in one
/// component.
fn orbit_count(d: i64, bound: i64) -> usize {
    let mut parent = HashMap::new();
    for a in 1..=bound {
        for b in -bound..=bound {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c <= bound && a.gcd(&b).gcd(&c) == 1 {
                parent.insert((a, b, c), (a, b, c));
            }
        }
    }
    let keys: Vec<_> = parent.keys().copied().collect();
    for &(a, b, c) in &keys {
        for n in [
            (c, -b, a),
            (a, b + 2 * a, a + b + c),
            (a, b - 2 * a, a - b + c),
        ] {
            if parent.contains_key(&n) {
                let (x, y) = (find(&mut parent, (a, b, c)), find(&mut parent, n));
                parent.insert(x, y);
            }
        }
    }
    let mut roots: Vec<_> = keys.iter().map(|&k| find(&mut parent, k)).collect();
    roots.sort();
    roots.dedup();
    roots.len()
}

#[test]
fn class_numbers_match_orbit_oracle() {
    for n in 3..=200i64 {
        let d = -n;
        if d.rem_euclid(4) > 1 {
            continue;
        }
        let h = class_number(d).unwrap();
        assert_eq!(h, orbit_count(d, 70), "d = {d}");
        for f in class_group_enumerate(d).unwrap() {
            assert!(f.is_reduced() && f.is_primitive() && f.reduce() == f);
        }
    }
}

fn consts() -> Consts {
    Consts::new().unwrap()
}

/// `q^{1/24} Π (1 − qⁿ)` at `τ = i`, directly in reals.
fn eta_i_product(prec: usize) -> BigFloat {
    let mut cc = consts();
    let two_pi = cc.pi(prec, RM).mul(&BigFloat::from_i32(2, prec), prec, RM);
    let q = two_pi.neg().exp(prec, RM, &mut cc);
    let mut p = two_pi
        .neg()
        .div(&BigFloat::from_i32(24, prec), prec, RM)
        .exp(prec, RM, &mut cc);
    let one = BigFloat::from_i32(1, prec);
    let mut qn = q.clone();
    for _ in 0..80 {
        p = p.mul(&one.sub(&qn, prec, RM), prec, RM);
        qn = qn.mul(&q, prec, RM);
    }
    p
}

#[test]
fn eta_at_i_matches_product() {
    let tau = BigComplex::i(256);
    let e = eta(&tau, 256).unwrap();
    let d = e
        .value
        .dist(&BigComplex::from_real(eta_i_product(320), 320));
    assert!(log10_abs(&d) < -50.0, "{}", log10_abs(&d));
    assert!(e.error_log10() < -70.0);
    assert!(
        e.value
            .to_decimal(20)
            .starts_with("7.6822542232605665900e-1"),
        "{}",
        e.value.to_decimal(20)
    );
}

#[test]
fn constant_series_evaluates_to_one() {
    let tau = BigComplex::new(
        BigFloat::from_f64(0.3, 128),
        BigFloat::from_f64(0.7, 128),
        128,
    );
    let v = eval_qseries(&QSeries::one(), &tau, 128).unwrap();
    assert!(log10_abs(&v.value.dist(&BigComplex::one(128))) < -35.0);
}

fn tau0(prec: usize) -> BigComplex {
    let im =
        BigFloat::from_i32(15, prec)
            .sqrt(prec, RM)
            .div(&BigFloat::from_i32(10, prec), prec, RM);
    BigComplex::new(BigFloat::from_i32(1, prec), im, prec)
}

#[test]
fn x_at_tau0_is_one_sixteenth() {
    let sixteenth = BigComplex::from_real(BigFloat::from_f64(0.0625, 256), 256);
    let by_series = eval_qseries(&build("X", 200).unwrap(), &tau0(256), 256).unwrap();
    assert!(log10_abs(&by_series.value.dist(&sixteenth)) < -50.0);
    let by_eta = x_at(&tau0(256), 256).unwrap();
    assert!(log10_abs(&by_eta.value.dist(&sixteenth)) < -70.0);
    let (re, im) = by_eta.value.to_f64();
    assert!(re == 0.0625 && im.abs() < 1e-70);
}

#[test]
fn short_series_and_bad_points_are_rejected() {
    let x = build("X", 10).unwrap();
    assert!(matches!(
        eval_qseries(&x, &tau0(256), 256),
        Err(NumericsError::SeriesTooShort { .. })
    ));
    let low = BigComplex::new(BigFloat::from_i32(0, 64), BigFloat::from_f64(1e-5, 64), 64);
    assert!(matches!(
        eval_qseries(&x, &low, 64),
        Err(NumericsError::QTooLarge(_))
    ));
    let below = BigComplex::new(BigFloat::from_i32(0, 64), BigFloat::from_i32(-1, 64), 64);
    assert_eq!(
        eta(&below, 64).unwrap_err(),
        NumericsError::NotInUpperHalfPlane
    );
}

#[test]
fn eta_quotient_matches_forms_series() {
    let x = build("X", 300).unwrap();
    for f in Tables::builtin()
        .singular
        .iter()
        .map(|r| r.form)
        .filter(|f| f.a <= 20)
    {
        let tau = tau_of(&f, 192);
        let a = x_at(&tau, 192).unwrap();
        let b = eval_qseries(&x, &tau, 192).unwrap();
        let gap = log10_abs(&a.value.dist(&b.value));
        assert!(gap < -40.0, "{f}: {gap}");
    }
}

#[test]
fn singular_value_examples() {
    let t = Tables::builtin();
    for (form, text) in [
        ("(4,-8,5)", "(7 - 3*sqrt(5))/8"),
        ("(20,-12,5)", "i/(8*sqrt(2))"),
        ("(20,-20,9)", "(1 - sqrt(5))/16"),
    ] {
        let row = t
            .singular
            .iter()
            .find(|r| r.form.to_string() == form)
            .unwrap();
        assert_eq!(row.value.exact().unwrap(), text.parse::<Surd>().unwrap());
        let rep = verify_singular_value(row, 256).unwrap();
        assert!(rep.pass && rep.error_log10 < -40.0, "{rep:?}");
    }
}

#[test]
fn table1_at_256_bits() {
    let t = Tables::builtin();
    let reps = verify_singular_values(&t, 256).unwrap();
    assert_eq!(reps.len(), 16);
    for r in &reps {
        if r.form.to_string() == "(20,-40,37)" {
            assert_eq!(r.status, SingularStatus::PaperDiscrepancy);
            assert!(r.error_log10 > 0.0);
            let sub = r.substitute.as_ref().unwrap();
            assert_eq!(sub.value_text, "(83 - 9*sqrt(85))/8");
            assert!(sub.pass && sub.error_log10 < -40.0, "{sub:?}");
        } else {
            assert_eq!(r.status, SingularStatus::Pass, "{r:?}");
            assert!(
                r.error_log10 < -40.0 && r.certificate_log10 < -40.0,
                "{r:?}"
            );
        }
    }
    let on_eq: Vec<_> = reps
        .iter()
        .filter_map(|r| r.on_modular_equation.map(|b| (r.form.to_string(), b)))
        .collect();
    assert_eq!(on_eq, [("(20,-40,23)".to_string(), true)]);
}

#[test]
fn series_rows_match_forms() {
    let m = match_table3_to_forms(&Tables::builtin(), 192).unwrap();
    let by_c = |c: &str| {
        m.rows
            .iter()
            .find(|r| r.c == c)
            .unwrap()
            .forms
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(by_c("1/16"), ["(20,-40,23)"]);
    assert_eq!(by_c("(7 - 3*sqrt(5))/8"), ["(4,-8,5)", "(100,-200,101)"]);
    assert_eq!(by_c("(83 - 9*sqrt(85))/8"), ["(20,-40,37)"]);
    assert!(m.unmatched_rows.is_empty());
    let unmatched: Vec<String> = m.unmatched_forms.iter().map(|f| f.to_string()).collect();
    assert_eq!(unmatched, ["(20,-20,11)"]);
}

/// 1/π to 100 digits.
const INV_PI: &str = "0.3183098861837906715377675267450287240689192914809128974953346881177935952684530701802276055325061719";

fn inv_pi_decimal(prec: usize) -> BigFloat {
    let mut cc = consts();
    BigFloat::parse(INV_PI, astro_float::Radix::Dec, prec, RM, &mut cc)
}

#[test]
fn reference_pi_is_independent_and_correct() {
    let mut cc = consts();
    let lib = cc.pi(512, RM);
    let ours = reference_pi(512);
    let d = lib.sub(&ours, 512, RM);
    assert!(log10_abs(&d) < -150.0);
    let inv = BigFloat::from_i32(1, 512).div(&ours, 512, RM);
    assert!(log10_abs(&inv.sub(&inv_pi_decimal(512), 512, RM)) < -99.0);
}

/// Digits at 60, 80 and 160 terms for the `C = 1/16` row, frozen from a
/// run against the Machin reference; the term ratio is `0.6545`.
#[test]
fn one_sixteenth_row_converges_geometrically() {
    let t = Tables::builtin();
    let row = t.pi_series.iter().find(|r| r.c_text == "1/16").unwrap();
    assert!((term_ratio(row) - 0.6545).abs() < 1e-4);
    let digits: Vec<i64> = [60, 80, 160]
        .iter()
        .map(|&n| pi_report(row, n, 512).unwrap().digits)
        .collect();
    assert_eq!(digits, [12, 15, 30]);
    let rep = pi_report(row, 340, 512).unwrap();
    assert!(rep.digits >= 60 && rep.pass(), "{rep:?}");
    assert!(rep.tail_log10 > rep.error_log10 - 1.0, "{rep:?}");
}

#[test]
fn complex_pair_is_real() {
    let t = Tables::builtin();
    let pair: Vec<_> = t.pi_series.iter().filter(|r| !r.c.is_real()).collect();
    assert_eq!(pair.len(), 2);
    for row in pair {
        let rep = pi_report(row, terms_for_digits(row, 45), 512).unwrap();
        assert!(rep.imag_log10 < -40.0 && rep.error_log10 < -40.0, "{rep:?}");
    }
}

#[test]
fn every_row_converges_to_inverse_pi() {
    for row in &Tables::builtin().pi_series {
        let n = terms_for_digits(row, 45);
        let rep = pi_report(row, n, 512).unwrap();
        assert!(rep.pass(), "{rep:?}");
        // The heuristic tail does not undershoot the measured error.
        assert!(
            rep.tail_log10 > rep.error_log10 - 1.0 || rep.error_log10 < -150.0,
            "{rep:?}"
        );
    }
}

/// Rows within 1e-40 at 80 terms: those with term ratio below about 0.3.
#[test]
fn eighty_terms_suffice_for_fast_rows_only() {
    let t = Tables::builtin();
    let fast: Vec<usize> = t
        .pi_series
        .iter()
        .filter(|r| pi_report(r, 80, 512).unwrap().pass())
        .map(|r| r.row)
        .collect();
    assert_eq!(fast, [7, 8, 9, 10, 11, 12, 13]);
}

#[test]
fn one_term_is_a_times_b() {
    for row in &Tables::builtin().pi_series {
        let s = pi_series_sum(row, 1, 256).unwrap();
        let ab = row.a.eval(256).unwrap().mul(&row.b.to_complex(256));
        assert!(log10_abs(&s.value.dist(&ab)) < -70.0, "{}", row.row);
    }
    assert_eq!(
        pi_series_sum(&Tables::builtin().pi_series[0], 0, 64).unwrap_err(),
        NumericsError::NoTerms
    );
}

fn x_order_200() -> QSeries {
    build("X", 200).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificate_is_sound(re in -0.5f64..0.5, im in 0.35f64..1.5, prec in 64usize..200) {
        let x = x_order_200();
        let tau = BigComplex::new(BigFloat::from_f64(re, 320), BigFloat::from_f64(im, 320), 320);
        let lo = eval_qseries(&x, &tau, prec).unwrap();
        let hi = eval_qseries(&x, &tau, prec + 64).unwrap();
        let gap = lo.value.dist(&hi.value);
        prop_assert!(gap.cmp(&lo.error).is_some_and(|c| c <= 0), "gap {} cert {}", log10_abs(&gap), lo.error_log10());
        let e1 = eta(&tau, prec).unwrap();
        let e2 = eta(&tau, prec + 64).unwrap();
        prop_assert!(e1.value.dist(&e2.value).cmp(&e1.error).is_some_and(|c| c <= 0));
    }
}
