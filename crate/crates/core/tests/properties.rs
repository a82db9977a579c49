#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use opsets_core::discrimination::verify_witness;
use opsets_core::format::{parse_state_set, serialize_state_set};
use opsets_core::linalg::{inner, kron};
use opsets_core::measurement::{enumerate_op_pvms, Projector};
use opsets_core::scalar::{rat, ratio};
use opsets_core::*;
use proptest::prelude::*;
use rand::Rng;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 24,
        ..ProptestConfig::default()
    }
}

fn dims2() -> impl Strategy<Value = Vec<usize>> {
    (1usize..=3, 2usize..=3).prop_map(|(a, b)| vec![a, b])
}

/// A random orthogonal product set: a subset of a random complete basis.
fn random_set(seed: u64, dims: &[usize], max_states: usize, complex: bool) -> StateSet {
    let mut r = rng(seed);
    let full = random_copb(&mut r, dims, complex);
    let size = r.gen_range(1..=full.len().min(max_states));
    random_subset(&mut r, &full, size)
}

fn random_scalar(r: &mut TestRng) -> Scalar {
    loop {
        let s = Scalar::new(
            ratio(r.gen_range(-3..=3), r.gen_range(1..=3)),
            rat(r.gen_range(-2..=2)),
        );
        if !s.is_zero() {
            return s;
        }
    }
}

fn rescaled(r: &mut TestRng, s: &StateSet) -> StateSet {
    let states = s
        .states()
        .iter()
        .map(|st| {
            let factors = st
                .factors
                .iter()
                .map(|f| {
                    let c = random_scalar(r);
                    LocalVector::new(f.party, f.coords.iter().map(|x| &c * x).collect())
                })
                .collect();
            ProductState::new(st.label.clone(), factors)
        })
        .collect();
    s.with_states(states)
}

fn random_projector(r: &mut TestRng, party: usize, dim: usize) -> Projector {
    let k = r.gen_range(1..=dim);
    let coords: Vec<usize> = (0..dim).collect();
    let complex = r.gen_bool(0.3);
    let mut basis = random_local_basis(r, dim, &coords, complex);
    basis.truncate(k);
    Projector::new(party, dim, basis).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn predicates_are_scale_invariant(seed in any::<u64>(), dims in dims2(), complex in any::<bool>()) {
        let s = random_set(seed, &dims, 6, complex);
        let t = rescaled(&mut rng(seed ^ 1), &s);
        prop_assert!(is_orthogonal_set(&t).orthogonal);
        prop_assert_eq!(classify_completeness(&s).unwrap(), classify_completeness(&t).unwrap());
        for p in 0..2 {
            let (a, _) = derive_constraint_space(&s, p).unwrap();
            let (b, _) = derive_constraint_space(&t, p).unwrap();
            prop_assert_eq!(a.dim_space(), b.dim_space());
            prop_assert!(a.basis.iter().all(|h| b.contains(h)));
        }
        prop_assert_eq!(is_upb(&s).unwrap().upb, is_upb(&t).unwrap().upb);
        prop_assert_eq!(s.canonical_key(), t.canonical_key());
    }

    #[test]
    fn flatten_preserves_overlaps(seed in any::<u64>(), a in 1usize..=3, b in 1usize..=3, c in 2usize..=3) {
        let s = random_set(seed, &[a, b, c], 8, seed % 2 == 0);
        for bip in Bipartition::all(3) {
            let f = flatten(&s, &bip).unwrap();
            prop_assert_eq!(f.labels(), s.labels());
            prop_assert_eq!(f.total_dim(), s.total_dim());
            for i in 0..s.len() {
                for j in 0..s.len() {
                    prop_assert_eq!(f.overlap(i, j), s.overlap(i, j));
                }
            }
            // Flattened factors are Kronecker products in party order.
            let st = &s.states()[0];
            let group: Vec<usize> = bip.group_a.iter().copied().collect();
            let expect = group[1..].iter().fold(st.factor(group[0]).to_vec(), |acc, &p| kron(&acc, st.factor(p)));
            prop_assert_eq!(f.states()[0].factor(0), expect.as_slice());
        }
    }

    #[test]
    fn constraint_space_is_sound_and_matches_dense_solve(seed in any::<u64>(), dims in dims2(), complex in any::<bool>()) {
        let s = random_set(seed, &dims, 6, complex);
        for p in 0..2 {
            let (space, records) = derive_constraint_space(&s, p).unwrap();
            prop_assert!(space.contains(&Operator::identity(dims[p])));
            for h in &space.basis {
                prop_assert!(h.is_hermitian());
                for r in records.iter().filter(|r| r.active) {
                    let (i, j) = r.pair;
                    prop_assert!(h.sandwich(s.states()[i].factor(p), s.states()[j].factor(p)).is_zero());
                }
            }
            for r in &records {
                prop_assert_eq!(r.active, !s.bystander_overlap(r.pair.0, r.pair.1, p).is_zero());
            }
            prop_assert_eq!(space.dim_space(), dense_constraint_dim(&s, p));
            prop_assert_eq!(only_trivial(&space), space.effective_dim <= 1);
        }
    }

    #[test]
    fn constraint_space_grows_as_states_are_removed(seed in any::<u64>(), dims in dims2()) {
        let s = random_set(seed, &dims, 7, true);
        prop_assume!(s.len() >= 2);
        let smaller = s.without(&s.states()[0].label);
        for p in 0..2 {
            let (big, _) = derive_constraint_space(&s, p).unwrap();
            let (small, _) = derive_constraint_space(&smaller, p).unwrap();
            prop_assert!(small.dim_space() >= big.dim_space());
            prop_assert!(big.basis.iter().all(|h| small.contains(h)));
        }
    }

    #[test]
    fn enumerated_pvms_are_valid(seed in any::<u64>(), dims in dims2(), complex in any::<bool>()) {
        let s = random_set(seed, &dims, 6, complex);
        for p in 0..2 {
            let e = enumerate_op_pvms(&s, p).unwrap();
            for m in &e.pvms {
                prop_assert!(m.is_nontrivial());
                prop_assert_eq!(m.elements().iter().map(Projector::rank).sum::<usize>(), dims[p]);
                let sum = m.matrices().iter().fold(Operator::zeros(dims[p]), |acc, x| acc.add(x));
                prop_assert_eq!(sum, Operator::identity(dims[p]));
                for (i, x) in m.elements().iter().enumerate() {
                    prop_assert!(x.matrix().is_projector());
                    prop_assert!(x.matrix().is_hermitian());
                    for y in &m.elements()[i + 1..] {
                        prop_assert!(x.is_orthogonal_to(y));
                    }
                }
                prop_assert!(is_orthogonality_preserving(&s, m).unwrap());
            }
        }
    }

    #[test]
    fn projection_is_idempotent(seed in any::<u64>(), dims in dims2()) {
        let s = random_set(seed, &dims, 9, true);
        let mut r = rng(seed ^ 7);
        let p = r.gen_range(0..2);
        let proj = random_projector(&mut r, p, dims[p]);
        let once = apply_projector(&s, &proj).unwrap();
        let twice = apply_projector(&once.survivors, &proj).unwrap();
        prop_assert_eq!(&twice.survivors, &once.survivors);
        prop_assert_eq!(twice.closure, Closure::Subset);
        prop_assert!(twice.eliminated_labels.is_empty());
    }

    #[test]
    fn subset_closure_means_proportional_survivors(seed in any::<u64>(), dims in dims2()) {
        let s = random_set(seed, &dims, 9, seed % 3 == 0);
        let mut r = rng(seed ^ 11);
        let p = r.gen_range(0..2);
        let proj = random_projector(&mut r, p, dims[p]);
        let out = apply_projector(&s, &proj).unwrap();
        let all_old = out
            .survivors
            .states()
            .iter()
            .all(|st| s.states().iter().any(|o| o.label == st.label && o.proportional_to(st)));
        prop_assert_eq!(out.closure == Closure::Subset, all_old);
        prop_assert_eq!(out.survivors.len() + out.eliminated_labels.len(), s.len());
        prop_assert!(is_orthogonal_set(&out.survivors).orthogonal || out.closure == Closure::NewDirections);
    }

    #[test]
    fn completeness_tags_are_consistent(seed in any::<u64>(), dims in dims2()) {
        let s = random_set(seed, &dims, 9, true);
        let c = classify_completeness(&s).unwrap();
        let spans: usize = c.local_span_dims.iter().product();
        match c.tag {
            CompletenessTag::Complete => prop_assert_eq!(s.len(), s.total_dim()),
            CompletenessTag::SubspaceComplete => {
                prop_assert_eq!(s.len(), spans);
                prop_assert!(c.local_span_dims.iter().zip(s.dims()).any(|(a, b)| a < b));
            }
            CompletenessTag::IncompleteNonSubspace => prop_assert!(s.len() < spans),
        }
        for (p, &d) in c.local_span_dims.iter().enumerate() {
            let f: Vec<Vec<Scalar>> = s.states().iter().map(|st| st.factor(p).to_vec()).collect();
            prop_assert_eq!(d, complex_rank(&f));
        }
    }

    #[test]
    fn upb_agrees_with_assignment_oracle(seed in any::<u64>(), dims in dims2()) {
        let s = random_set(seed, &dims, 8, seed % 2 == 1);
        let v = is_upb(&s).unwrap();
        prop_assert_eq!(v.upb, upb_by_assignment(&s));
        if let Some(w) = &v.witness {
            prop_assert!(verify_witness(&s, w).unwrap());
            for st in s.states() {
                let ov = (0..2).fold(Scalar::one(), |acc, p| &acc * &inner(w.factor(p), st.factor(p)));
                prop_assert!(ov.is_zero());
            }
        }
        prop_assert_eq!(v.upb, v.witness.is_none());
    }

    #[test]
    fn protocols_are_well_formed(seed in any::<u64>(), dims in dims2()) {
        let s = random_set(seed, &dims, 6, false);
        let v = search_protocol(&s, 6).unwrap();
        if v.verdict == Verdict::Distinguishable {
            let mut ok = true;
            v.tree.visit(&mut |n| match &n.action {
                NodeAction::Identified(_) => ok &= n.candidates.len() == 1,
                NodeAction::Empty => ok &= n.candidates.is_empty(),
                NodeAction::Fail => ok = false,
                NodeAction::Measure { pvm, children, .. } => {
                    ok &= is_orthogonality_preserving(&n.candidates, pvm).unwrap();
                    let outs = measure(&n.candidates, pvm).unwrap();
                    for (k, child) in children {
                        ok &= child.candidates == outs[*k].survivors;
                    }
                }
            });
            prop_assert!(ok);
            prop_assert!(replay_protocol(&s, &v.tree).unwrap());
        }
        if s.len() <= 1 {
            prop_assert_eq!(v.verdict, Verdict::Distinguishable);
        }
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>(), dims in dims2()) {
        let s = rescaled(&mut rng(seed), &random_set(seed, &dims, 9, true));
        let text = serialize_state_set(&s);
        let back = parse_state_set(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(serialize_state_set(&back), text);
    }

    #[test]
    fn tiles_match_supports(seed in any::<u64>(), dims in dims2()) {
        let s = random_set(seed, &dims, 9, false);
        let t = tiling(&s).unwrap();
        let mut seen = 0;
        for tile in &t.tiles {
            for l in &tile.labels {
                let st = &s.states()[s.index_of(l).unwrap()];
                prop_assert_eq!(&tile.rows, &st.factors[0].support());
                prop_assert_eq!(&tile.cols, &st.factors[1].support());
                seen += 1;
            }
        }
        prop_assert_eq!(seen, s.len());
        for (i, a) in t.tiles.iter().enumerate() {
            for b in &t.tiles[i + 1..] {
                prop_assert!(a.rows != b.rows || a.cols != b.cols);
            }
        }
    }
}
