use num_traits::{One, Zero};
use proptest::prelude::*;

use jackmix::chain::{build_kernel, ewens, ThetaParam};
use jackmix::jack::jack_table;
use jackmix::partitions::enumerate_partitions;
use jackmix::rational::{int, rat};
use jackmix::sdops::{
    apply, apply_to_power_sum, composition_stationary, dtheta3_as_printed, elementary_u, elementary_u_closed_form,
    expansion, is_triangular, lb2_markov_rows, lb2_monomial_matrix, oracle, power_sum_matrix, v_on_elementary, OpKind,
    OperatorSpec,
};
use jackmix::symfunc::{convert, Basis, SymExpansion};
use jackmix::{Partition, Rat};

fn p(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

fn op(kind: OpKind, theta: Rat, n_vars: u32) -> OperatorSpec {
    OperatorSpec::new(kind, theta, n_vars).unwrap()
}

/// The scalar c with f·c = g, if there is one.
fn ratio(f: &SymExpansion, g: &SymExpansion) -> Option<Rat> {
    let (lam, c) = f.coeffs().iter().find(|(_, c)| !c.is_zero())?;
    let r = g.coeff(lam) / c;
    g.sub(&f.scale(&r)).unwrap().is_zero().then_some(r)
}

#[test]
fn dtheta2_on_the_worked_example() {
    let t = rat(3, 2);
    let img = apply_to_power_sum(&op(OpKind::Dtheta2, t.clone(), 5), &p(&[3, 1, 1])).unwrap();
    assert_eq!(img.coeff(&p(&[2, 1, 1, 1])), int(-3) * &t);
    assert_eq!(img.coeff(&p(&[3, 1, 1])), int(7) * &t * &t + int(33) * &t + int(35));
    assert_eq!(img.coeff(&p(&[4, 1])), int(-6) * &t * &t);
    assert_eq!(img.coeff(&p(&[3, 2])), -(&t * &t));
}

#[test]
fn jacks_are_common_eigenvectors() {
    for n in 1..=6u32 {
        for t in [rat(1, 2), rat(2, 1)] {
            let tab = jack_table(n, &t).unwrap();
            let ops = [op(OpKind::Dtheta2, t.clone(), n + 1), op(OpKind::Dtheta3, t.clone(), n + 2)];
            for lam in tab.partitions().iter() {
                let j = tab.expansion(lam);
                for o in &ops {
                    assert!(ratio(&j, &apply(o, &j).unwrap()).is_some(), "{} on J{lam}", o.kind);
                }
            }
        }
    }
}

#[test]
fn normalized_rows_are_the_kernel_above_one() {
    for n in 2..=6u32 {
        for t in [rat(2, 1), rat(3, 1), rat(7, 3)] {
            let rows = lb2_markov_rows(n, &t, n + 3).unwrap();
            let k = build_kernel(n, &ThetaParam::new(t.clone()).unwrap(), &Rat::zero()).unwrap();
            assert_eq!(rows, k.dense(), "n={n} θ={t}");
        }
    }
}

#[test]
fn monomial_matrix_is_triangular() {
    for n in 2..=8u32 {
        for t in [rat(1, 2), rat(2, 1)] {
            assert!(is_triangular(&lb2_monomial_matrix(n, &t, n).unwrap()), "n={n}");
        }
    }
    let dense = vec![vec![int(1), int(2)], vec![int(3), int(4)]];
    assert!(!is_triangular(&dense));
}

#[test]
fn too_few_variables_is_an_error() {
    let o = op(OpKind::Dtheta2, rat(2, 1), 3);
    assert!(apply_to_power_sum(&o, &p(&[2, 1, 1])).is_err());
    let f = SymExpansion::basis_element(Basis::PowerSum, &p(&[3, 1]));
    assert!(dtheta3_as_printed(&rat(2, 1), 3, &f).is_err());
    assert!(OperatorSpec::new(OpKind::D110, Rat::zero(), 3).is_err());
    assert!(OperatorSpec::new(OpKind::D110, Rat::one(), 0).is_err());
}

#[test]
fn op_names_parse() {
    for k in OpKind::ALL {
        assert_eq!(k.name().parse::<OpKind>().unwrap(), k);
        assert_eq!(k.to_string().to_uppercase().parse::<OpKind>().unwrap(), k);
    }
    assert!("d999".parse::<OpKind>().is_err());
}

#[test]
fn basis_of_the_input_is_kept() {
    let o = op(OpKind::Dtheta2, rat(1, 3), 6);
    let f = expansion(Basis::Monomial, 4, &[(&[2, 1, 1], 2), (&[4], -1)]).unwrap();
    let out = apply(&o, &f).unwrap();
    assert_eq!(out.basis(), Basis::Monomial);
    let via_p = apply(&o, &convert(&f, Basis::PowerSum).unwrap()).unwrap();
    assert_eq!(convert(&out, Basis::PowerSum).unwrap(), via_p);
}

#[test]
fn atoms_against_literal_differentiation() {
    for kind in [OpKind::D110, OpKind::D002, OpKind::D120, OpKind::D210, OpKind::D003] {
        for n in 1..=4u32 {
            for lam in enumerate_partitions(n).unwrap() {
                assert!(oracle::check(&op(kind, rat(2, 3), 5), &lam).unwrap(), "{kind} p{lam}");
            }
        }
    }
}

#[test]
fn printed_dtheta3_variant_differs_only_in_scaled_groups() {
    let t = rat(2, 1);
    let f = SymExpansion::basis_element(Basis::PowerSum, &p(&[3, 1, 1]));
    let true_img = apply(&op(OpKind::Dtheta3, t.clone(), 5), &f).unwrap();
    let shown = dtheta3_as_printed(&t, 5, &f).unwrap();
    assert_ne!(true_img, shown);
    // The p₅ term is untouched by the reweighting.
    assert_eq!(true_img.coeff(&p(&[5])), shown.coeff(&p(&[5])));
}

#[test]
fn elementary_actions() {
    for r2 in 1..=5u32 {
        for r1 in 1..=r2 {
            let n = r1 + r2;
            let u = elementary_u(r1, r2, n + 2).unwrap();
            assert_eq!(u.basis(), Basis::Elementary);
            assert_eq!(u.degree(), n);
            assert!(elementary_u_closed_form(r1, r2).is_ok());
        }
    }
    // The generic action on e₁² differs from the closed form in its e₁² term.
    let u = elementary_u(1, 1, 4).unwrap();
    assert_eq!(u, expansion(Basis::Elementary, 2, &[(&[1, 1], 4), (&[2], -4)]).unwrap());
    assert_ne!(u, elementary_u_closed_form(1, 1).unwrap());
    assert!(elementary_u_closed_form(3, 2).is_err());
    assert!(elementary_u(0, 2, 4).is_err());
    for r in 1..=6 {
        assert!(v_on_elementary(r, 8).unwrap().is_some(), "r={r}");
    }
}

#[test]
fn composition_with_one_theta_is_ewens() {
    for n in 2..=6u32 {
        for t in [rat(1, 2), rat(3, 1)] {
            let pi = ewens(n, &ThetaParam::new(t.clone()).unwrap()).unwrap();
            assert_eq!(composition_stationary(&t, &t, n).unwrap(), pi.probs().to_vec());
        }
    }
    assert!(composition_stationary(&Rat::one(), &Rat::one(), 3).is_err());
    assert!(composition_stationary(&rat(2, 1), &rat(3, 1), 10).is_err());
    let s = composition_stationary(&rat(2, 1), &rat(3, 1), 3).unwrap();
    assert_eq!(s.iter().cloned().sum::<Rat>(), Rat::one());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operators_commute(n in 1u32..=5, a in 1i64..=4, b in 1i64..=4) {
        let t = rat(a, b);
        let n_vars = n + 2;
        let d2 = power_sum_matrix(&op(OpKind::Dtheta2, t.clone(), n_vars), n).unwrap();
        let d3 = power_sum_matrix(&op(OpKind::Dtheta3, t, n_vars), n).unwrap();
        let m = d2.len();
        for i in 0..m {
            for j in 0..m {
                let x: Rat = (0..m).map(|k| &d2[i][k] * &d3[k][j]).sum();
                let y: Rat = (0..m).map(|k| &d3[i][k] * &d2[k][j]).sum();
                prop_assert_eq!(x, y);
            }
        }
    }
}
