use proptest::prelude::*;

use cychom::algebra_cat::DEFAULT_GUARD;
use cychom::ayd::{adjoint_module, trivial_module};
use cychom::complexes::{hh_hc, validate_paracyclic, Mode, ParaCyclicModule};
use cychom::groupoid_alg::{action_groupoid, build_bialgebroid, FinGroupoid, GSet};
use cychom::groupoid_homology::{compare, cyclic_simplex};
use cychom::qlinalg::{inverse, rank, Rational, RationalMatrix};

fn dense(rows: usize, cols: usize, vals: &[i64]) -> RationalMatrix {
    let data: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| Rational::from_int(vals[r * cols + c]))
                .collect()
        })
        .collect();
    RationalMatrix::from_dense(rows, cols, &data)
}

/// Unit lower triangular times unit upper triangular, with the given
/// off-diagonal entries; always invertible.
fn invertible(
    n: usize,
    lower: &[(usize, usize, i64)],
    upper: &[(usize, usize, i64)],
) -> RationalMatrix {
    let tri = |entries: &[(usize, usize, i64)], below: bool| {
        let mut m = RationalMatrix::identity(n);
        for &(a, b, v) in entries {
            let (a, b) = (a % n, b % n);
            let (r, c) = if (a > b) == below { (a, b) } else { (b, a) };
            if r != c {
                m.set(r, c, Rational::from_int(v));
            }
        }
        m
    };
    tri(lower, true).mul(&tri(upper, false))
}

fn conjugate(m: &ParaCyclicModule, p: &[RationalMatrix]) -> ParaCyclicModule {
    let pinv: Vec<RationalMatrix> = p.iter().map(|x| inverse(x).expect("invertible")).collect();
    let faces = m
        .faces
        .iter()
        .enumerate()
        .map(|(n, fs)| fs.iter().map(|d| p[n - 1].mul(d).mul(&pinv[n])).collect())
        .collect();
    let degeneracies = m.degeneracies.as_ref().map(|ds| {
        ds.iter()
            .enumerate()
            .map(|(n, ss)| ss.iter().map(|s| p[n + 1].mul(s).mul(&pinv[n])).collect())
            .collect()
    });
    let cyclic = m.cyclic.as_ref().map(|ts| {
        ts.iter()
            .enumerate()
            .map(|(n, t)| p[n].mul(t).mul(&pinv[n]))
            .collect()
    });
    ParaCyclicModule {
        dims: m.dims.clone(),
        faces,
        degeneracies,
        cyclic,
    }
}

fn entries() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..64, 0usize..64, -3i64..=3), 0..12)
}

/// ℤ/n acting through a permutation whose cycle lengths divide n, with at
/// most six morphisms in the action groupoid so degree 3 fits the guard.
fn cyclic_gset() -> impl Strategy<Value = GSet> {
    (1usize..=3).prop_flat_map(|n| {
        let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
        let cap = 6 / n;
        prop::collection::vec(prop::sample::select(divisors), 1..=cap)
            .prop_filter("too many points", move |c| c.iter().sum::<usize>() <= cap)
            .prop_map(move |cycles| {
                let mut perm = Vec::new();
                for len in cycles {
                    let base = perm.len();
                    perm.extend((0..len).map(|i| base + (i + 1) % len));
                }
                let set: Vec<String> = (0..perm.len()).map(|i| format!("p{i}")).collect();
                let mut action = Vec::new();
                for g in 0..n {
                    for x in 0..perm.len() {
                        let y = (0..g).fold(x, |y, _| perm[y]);
                        action.push((g, x, y));
                    }
                }
                GSet::new(FinGroupoid::cyclic_group(n), set, &action).expect("valid action")
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rank_is_transpose_invariant(rows in 1usize..6, cols in 1usize..6, vals in prop::collection::vec(-2i64..=2, 36)) {
        let m = dense(rows, cols, &vals);
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        prop_assert!(rank(&m) <= rows.min(cols));
    }

    #[test]
    fn inverse_is_two_sided(n in 1usize..7, lo in entries(), up in entries()) {
        let p = invertible(n, &lo, &up);
        let q = inverse(&p).expect("unit triangular product");
        prop_assert!(p.mul(&q).is_identity());
        prop_assert!(q.mul(&p).is_identity());
        prop_assert_eq!(rank(&p), n);
    }

    #[test]
    fn cyclic_homology_ignores_basis_change(which in 0usize..3, lo in entries(), up in entries()) {
        let g = [FinGroupoid::cyclic_group(2), FinGroupoid::pair(2), FinGroupoid::cyclic_group(3)][which].clone();
        let m = adjoint_module(&build_bialgebroid(&g));
        let cs = cyclic_simplex(&m, 3, DEFAULT_GUARD).unwrap().module;
        let p: Vec<RationalMatrix> = cs.dims.iter().map(|&d| invertible(d, &lo, &up)).collect();
        let moved = conjugate(&cs, &p);
        prop_assert!(validate_paracyclic(&moved, Mode::Cyclic).is_empty());
        prop_assert_eq!(hh_hc(&moved).unwrap(), hh_hc(&cs).unwrap());
    }

    #[test]
    fn action_groupoids_agree_with_orbit_formula(gs in cyclic_gset()) {
        let (g, rep) = action_groupoid(&gs);
        prop_assert!(rep.is_cocycle && rep.normalized && rep.algebras_equal);
        let bd = build_bialgebroid(&g);
        for m in [adjoint_module(&bd), trivial_module(&bd)] {
            let c = compare(&m, 3, DEFAULT_GUARD).unwrap();
            prop_assert!(c.agree, "direct {:?}/{:?} formula {:?}/{:?}", c.direct.hh, c.direct.hc, c.burghelea.hh, c.burghelea.hc);
        }
    }
}
