use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use innerrate_core::dualgraph::{canonical_key, DecoratedTriple, DualGraph, Vertex, VertexId};
use innerrate_core::exactalg::{rat, rat_int, solve_exact, Rat};
use innerrate_core::ratecalc::{
    polar_from_rates, rates_from_triple, recurrence_extend, skeletal_distance, Blowup, GraphPoint,
};
use innerrate_core::toric::{
    integral_closure, invariants_at_ray, minimal_resolution_chain, newton_polygon, required_rays,
    triple_of_ideal, MonomialIdeal, Ray,
};

fn ideal_strategy(max_exp: u32) -> impl Strategy<Value = MonomialIdeal> {
    (
        1..=max_exp,
        1..=max_exp,
        prop::collection::vec((0..=max_exp, 0..=max_exp), 0..4),
    )
        .prop_map(|(a, b, mut extra)| {
            extra.retain(|&e| e != (0, 0));
            extra.push((a, 0));
            extra.push((0, b));
            MonomialIdeal::new(extra).unwrap()
        })
}

#[derive(Debug, Clone)]
enum Step {
    Smooth(usize),
    Double(usize),
}

fn step_strategy() -> impl Strategy<Value = Vec<Step>> {
    prop::collection::vec(
        prop_oneof![
            any::<prop::sample::Index>().prop_map(|i| Step::Smooth(i.index(1 << 16))),
            any::<prop::sample::Index>().prop_map(|i| Step::Double(i.index(1 << 16))),
        ],
        0..8,
    )
}

fn apply_steps(mut g: DualGraph, steps: &[Step]) -> DualGraph {
    for s in steps {
        g = match *s {
            Step::Smooth(k) => {
                let v = g.vertices()[k % g.len()].id;
                g.blowup_smooth(v).unwrap().0
            }
            Step::Double(k) if !g.edges().is_empty() => {
                let (a, b) = g.edges()[k % g.edges().len()];
                g.blowup_double(a, b).unwrap().0
            }
            Step::Double(_) => g,
        };
    }
    g
}

/// Relists the vertices of a triple in `perm` order under fresh ids.
fn permuted(t: &DecoratedTriple, perm: &[usize]) -> DecoratedTriple {
    let old = t.graph.vertices();
    let new_id = |id: VertexId| {
        let idx = t.graph.index_of(id).unwrap();
        VertexId(100 + perm.iter().position(|&p| p == idx).unwrap() as u32)
    };
    let vertices: Vec<Vertex> = perm
        .iter()
        .map(|&i| Vertex {
            id: new_id(old[i].id),
            ..old[i]
        })
        .collect();
    let mut edges: Vec<(VertexId, VertexId)> = t
        .graph
        .edges()
        .iter()
        .map(|&(a, b)| (new_id(b), new_id(a)))
        .collect();
    edges.reverse();
    let graph = DualGraph::new(vertices, edges).unwrap();
    DecoratedTriple::new(
        graph,
        perm.iter().map(|&i| t.l[i]).collect(),
        perm.iter().map(|&i| t.p[i]).collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_axioms(
        a in (-20i64..20, 1i64..12),
        b in (-20i64..20, 1i64..12),
        c in (-20i64..20, 1i64..12),
    ) {
        let (x, y, z) = (rat(a.0, a.1), rat(b.0, b.1), rat(c.0, c.1));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!((&x + &y) + &z, &x + (&y + &z));
        prop_assert_eq!((&x * &y) * &z, &x * (&y * &z));
        prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
        prop_assert!(x.denom() > &BigInt::zero());
    }

    #[test]
    fn solve_exact_satisfies_system(steps in step_strategy(), rhs in prop::collection::vec(-9i64..9, 16)) {
        let g = apply_steps(DualGraph::chain(&[-1]).unwrap(), &steps);
        let m = g.intersection_matrix();
        let b: Vec<Rat> = (0..g.len()).map(|i| rat_int(rhs[i % rhs.len()])).collect();
        let x = solve_exact(&m, &b).unwrap();
        prop_assert_eq!(m.mul_rat(&x).unwrap(), b);
    }

    #[test]
    fn blowups_preserve_definiteness_and_determinant(steps in step_strategy()) {
        let seed = DualGraph::chain(&[-1, -3, -1]).unwrap();
        let d0 = seed.intersection_matrix().determinant().unwrap();
        let mut g = seed;
        for s in &steps {
            let (n, e) = (g.len(), g.edges().len());
            let next = apply_steps(g.clone(), std::slice::from_ref(s));
            if next.len() != n {
                prop_assert_eq!(next.len(), n + 1);
                prop_assert_eq!(next.edges().len(), e + 1);
            }
            g = next;
            prop_assert!(g.is_negative_definite());
            let d = g.intersection_matrix().determinant().unwrap();
            prop_assert_eq!(d.magnitude(), d0.magnitude());
        }
    }

    #[test]
    fn canonical_key_ignores_listing_order(
        steps in step_strategy(),
        deco in prop::collection::vec((0u64..3, 0u64..3), 16),
        shuffle in any::<u64>(),
    ) {
        let g = apply_steps(DualGraph::chain(&[-2, -2, -2]).unwrap(), &steps);
        let n = g.len();
        let t = DecoratedTriple::new(
            g,
            (0..n).map(|i| deco[i % 16].0).collect(),
            (0..n).map(|i| deco[i % 16].1).collect(),
        ).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        // Fisher-Yates driven by the perturbation seed.
        let mut s = shuffle;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let u = permuted(&t, &perm);
        prop_assert_eq!(canonical_key(&t).unwrap(), canonical_key(&u).unwrap());
    }

    #[test]
    fn rates_round_trip_on_toric_triples(i in ideal_strategy(6)) {
        let res = triple_of_ideal(&i).unwrap();
        let prof = rates_from_triple(&res.triple).unwrap();
        prop_assert_eq!(&prof.m, &res.profile.m);
        prop_assert_eq!(&prof.q, &res.profile.q);
        let p = polar_from_rates(&res.triple.graph, &prof.m, &prof.q).unwrap();
        prop_assert_eq!(p, res.triple.p_vector());
    }

    #[test]
    fn inner_rates_formula_holds(i in ideal_strategy(8)) {
        let res = triple_of_ideal(&i).unwrap();
        let g = &res.triple.graph;
        let ma = g.intersection_matrix().mul_rat(&res.profile.a_vector()).unwrap();
        let rhs: Vec<Rat> = g.k_vector().into_iter()
            .zip(res.triple.l_vector())
            .zip(res.triple.p_vector())
            .map(|((k, l), p)| k + l - p)
            .collect();
        prop_assert_eq!(ma, rhs);
    }

    #[test]
    fn chain_structure(i in ideal_strategy(8)) {
        let chain = minimal_resolution_chain(&i);
        let req = required_rays(&i);
        for w in chain.rays().windows(2) {
            prop_assert_eq!(w[0].det(&w[1]), 1);
        }
        for (r, c) in chain.interior().iter().zip(chain.self_intersection_numbers()) {
            prop_assert!(c >= 2 || req.contains(r), "ray {} has c = {}", r, c);
        }
        for r in &req {
            prop_assert!(chain.interior().contains(r));
        }
        let res = triple_of_ideal(&i).unwrap();
        prop_assert!(res.triple.graph.is_negative_definite());
        res.profile.check_invariants().unwrap();
    }

    #[test]
    fn mediant_consistency(i in ideal_strategy(8)) {
        let rays = minimal_resolution_chain(&i).interior().to_vec();
        for w in rays.windows(2) {
            let (u, v) = (invariants_at_ray(&i, w[0]).unwrap(), invariants_at_ray(&i, w[1]).unwrap());
            let mid = invariants_at_ray(&i, w[0].mediant(&w[1])).unwrap();
            prop_assert_eq!(mid.m, u.m + v.m);
            let weighted = (rat_int(u.m) * &u.q + rat_int(v.m) * &v.q) / rat_int(u.m + v.m);
            prop_assert_eq!(mid.q, weighted);
        }
    }

    #[test]
    fn subdivision_preserves_skeletal_distance(i in ideal_strategy(6), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let res = triple_of_ideal(&i).unwrap();
        let n = res.profile.graph.len();
        let ends = (GraphPoint::vertex(VertexId(0)), GraphPoint::vertex(VertexId(n as u32 - 1)));
        let d0 = skeletal_distance(&res.profile, &ends.0, &ends.1).unwrap();
        let mut prof = res.profile.clone();
        for pick in picks {
            if prof.graph.edges().is_empty() {
                break;
            }
            let (a, b) = prof.graph.edges()[pick.index(prof.graph.edges().len())];
            prof = recurrence_extend(&prof, Blowup::Double(a, b)).unwrap().0;
            prof.check_invariants().unwrap();
            prop_assert_eq!(&skeletal_distance(&prof, &ends.0, &ends.1).unwrap(), &d0);
        }
    }

    #[test]
    fn integral_closure_laws(i in ideal_strategy(8)) {
        let c = integral_closure(&i);
        prop_assert!(i.is_subset_of(&c));
        prop_assert_eq!(integral_closure(&c), c.clone());
        prop_assert_eq!(newton_polygon(&i), newton_polygon(&c));
        for r in minimal_resolution_chain(&i).interior().iter().chain(minimal_resolution_chain(&c).interior()) {
            prop_assert_eq!(invariants_at_ray(&i, *r).unwrap().m, invariants_at_ray(&c, *r).unwrap().m);
        }
    }
}

#[test]
fn closure_pair_differs_only_in_nu() {
    let i = MonomialIdeal::parse("x^2, y^2").unwrap();
    let c = integral_closure(&i);
    let r = Ray::new(2, 1).unwrap();
    let (a, b) = (
        invariants_at_ray(&i, r).unwrap(),
        invariants_at_ray(&c, r).unwrap(),
    );
    assert_eq!(a.m, b.m);
    assert_ne!(a.nu, b.nu);
}

#[test]
fn toric_rate_matches_linear_interpolation_at_mediant() {
    // (x^2, y^2): q = 2 at (2,1), q = 1 at (1,1); the mediant (3,2) sits at t = 1/2.
    let i = MonomialIdeal::parse("x^2, y^2").unwrap();
    let res = triple_of_ideal(&i).unwrap();
    let x = GraphPoint::on_edge(VertexId(0), VertexId(1), rat(1, 2));
    let q = innerrate_core::ratecalc::rate_at(&res.profile, &x).unwrap();
    assert_eq!(q, rat(3, 2));
    assert_eq!(invariants_at_ray(&i, Ray::new(3, 2).unwrap()).unwrap().q, q);
    assert!(!q.is_integer() && q > Rat::one());
}
