use std::collections::BTreeMap;
use std::sync::OnceLock;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cylgame::corpus::{ca2_structures, ra_structures};
use cylgame::game::{abelard_moves, canonical, solve_bounded, solve_safety, Arena, GameConfig, Rounds};
use cylgame::network::{apply_map, delete_node, Checker, Network, Node};
use cylgame::repr::{CylindricOps, NPlus, RepresentationCandidate, SetAlgebra};
use cylgame::signature::Kind;
use cylgame::structure::{atom_structure_of, canonical_form, Atom, AtomStructure};

fn corpus() -> &'static [AtomStructure] {
    static C: OnceLock<Vec<AtomStructure>> = OnceLock::new();
    C.get_or_init(|| {
        let mut v = ra_structures(3).unwrap();
        v.extend(ca2_structures(Kind::Ca, 3).unwrap());
        v.extend(ca2_structures(Kind::Df, 3).unwrap());
        v
    })
}

/// A consistent network on nodes `0..k` (fewer if growth gets stuck),
/// random labelling choice at every step.
fn random_network(s: &AtomStructure, k: usize, rng: &mut ChaCha8Rng) -> Network {
    let ck = Checker::new(s);
    let mut n = Network::empty(ck.arity());
    for z in 0..k as Node {
        let opts = ck.grow(&n, z);
        let Some(next) = opts.choose(rng) else { break };
        n = next.clone();
    }
    n
}

fn random_map(dom: usize, cod: usize, rng: &mut ChaCha8Rng) -> BTreeMap<Node, Node> {
    (0..dom as Node).map(|x| (x, rng.gen_range(0..cod) as Node)).collect()
}

fn random_injection(n: usize, rng: &mut ChaCha8Rng) -> BTreeMap<Node, Node> {
    let mut p: Vec<Node> = (0..n as Node).collect();
    p.shuffle(rng);
    p.into_iter().enumerate().map(|(i, x)| (i as Node, x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonical_form_ignores_atom_names(pick in 0usize..1000, seed: u64) {
        let s = &corpus()[pick % corpus().len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<Atom> = (0..s.len() as Atom).collect();
        // RA structures keep the identity first
        let start = usize::from(matches!(s, AtomStructure::Ra(_)));
        perm[start..].shuffle(&mut rng);
        let t = s.permuted(&perm);
        prop_assert!(t.validate().is_empty());
        prop_assert_eq!(canonical_form(s).unwrap().0, canonical_form(&t).unwrap().0);
    }

    #[test]
    fn network_canonical_form_ignores_node_names(pick in 0usize..1000, seed: u64, k in 1usize..5) {
        let s = &corpus()[pick % corpus().len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = random_network(s, k, &mut rng);
        let theta = random_injection(n.len(), &mut rng);
        let renamed = apply_map(&n, &theta);
        prop_assert!(Checker::new(s).is_consistent(&renamed));
        prop_assert_eq!(canonical(&n).0, canonical(&renamed).0);
    }

    #[test]
    fn apply_map_is_functorial(pick in 0usize..1000, seed: u64, k in 1usize..5) {
        let s = &corpus()[pick % corpus().len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = random_network(s, k, &mut rng);
        prop_assume!(!n.is_empty());
        let theta = random_map(5, n.len(), &mut rng);
        let sigma = random_map(5, 5, &mut rng);
        // (Nθ)σ = N(θ∘σ)
        let composed: BTreeMap<Node, Node> = sigma.iter().map(|(&x, &y)| (x, theta[&y])).collect();
        prop_assert_eq!(apply_map(&apply_map(&n, &theta), &sigma), apply_map(&n, &composed));
        let id: BTreeMap<Node, Node> = n.nodes.iter().map(|&x| (x, x)).collect();
        prop_assert_eq!(apply_map(&n, &id), n);
    }

    #[test]
    fn node_deletions_commute(pick in 0usize..1000, seed: u64, k in 2usize..5) {
        let s = &corpus()[pick % corpus().len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = random_network(s, k, &mut rng);
        prop_assume!(n.len() >= 2);
        let a = n.nodes[rng.gen_range(0..n.len())];
        let b = *n.nodes.iter().find(|&&x| x != a).unwrap();
        let ab = delete_node(&delete_node(&n, a).unwrap(), b).unwrap();
        let ba = delete_node(&delete_node(&n, b).unwrap(), a).unwrap();
        prop_assert_eq!(&ab, &ba);
        // deletion is the map that forgets the node
        let keep: BTreeMap<Node, Node> = n.nodes.iter().filter(|&&x| x != a).map(|&x| (x, x)).collect();
        prop_assert_eq!(apply_map(&n, &keep), delete_node(&n, a).unwrap());
        prop_assert!(Checker::new(s).is_consistent(&ab));
    }

    #[test]
    fn extensions_are_consistent_witnesses(pick in 0usize..1000, seed: u64, k in 1usize..4, reuse: bool) {
        let s = &corpus()[pick % corpus().len()];
        let ck = Checker::new(s);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = random_network(s, k, &mut rng);
        prop_assume!(!n.is_empty());
        for d in abelard_moves(&ck, &n) {
            for m in ck.extensions(&n, &d, 5, reuse).unwrap() {
                prop_assert!(ck.is_consistent(&m), "inconsistent extension");
                prop_assert!(ck.satisfied(&m, &d), "extension does not witness the demand");
                if !reuse {
                    prop_assert_eq!(m.restrict(&n.nodes), n.clone());
                }
            }
        }
    }

    #[test]
    fn fewer_rounds_never_hurt_heloise(pick in 0usize..1000, reuse: bool) {
        let s = &corpus()[pick % corpus().len()];
        let arena = Arena::build(s, &GameConfig::new(3, Rounds::Omega).reuse(reuse)).unwrap();
        let safety = solve_safety(&arena);
        let mut prev = vec![true; arena.len()];
        for k in 0..5 {
            let b = solve_bounded(&arena, k);
            for id in 0..arena.len() as u32 {
                prop_assert!(!b.alive(id) || prev[id as usize], "alive at {} but not {}", k, k - 1);
                prop_assert!(!safety.alive[id as usize] || b.alive(id));
            }
            prev = (0..arena.len() as u32).map(|id| b.alive(id)).collect();
        }
    }

    #[test]
    fn lemma_n_on_random_networks(seed: u64) {
        // full CA_3 over base 3 as dilation of the full CA_2 over the same base
        let c = SetAlgebra::full(Kind::Ca, 3, 3).unwrap();
        let a2 = SetAlgebra::full(Kind::Ca, 2, 3).unwrap();
        let s = atom_structure_of(&a2.to_bao().unwrap(), Kind::Ca).unwrap();
        let atoms: Vec<_> = a2
            .tuples()
            .iter()
            .map(|t| c.from_tuples(c.tuples().iter().filter(|u| u[..2] == t[..]).map(|u| u.as_slice())).unwrap())
            .collect();
        let mut plus = NPlus::new(&c, atoms).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_network(&s, 3, &mut rng);
        let drop = rng.gen_range(0..3) as Node;
        let n = random_network(&s, 3, &mut rng);
        let n = delete_node(&n, drop).unwrap();
        let (mp, np) = (plus.eval(&m).unwrap(), plus.eval(&n).unwrap());
        prop_assert!(!c.is_zero(&np));
        prop_assert_eq!(c.cyl(drop as usize, &np), np.clone());
        if !c.is_zero(&c.meet(&mp, &np)) {
            for &x in &n.nodes {
                for &y in &n.nodes {
                    prop_assert_eq!(m.label(&[x, y]), n.label(&[x, y]));
                }
            }
        }
    }

    #[test]
    fn structure_json_round_trips(pick in 0usize..1000) {
        let s = &corpus()[pick % corpus().len()];
        let back = AtomStructure::from_json_str(&s.to_json_string()).unwrap();
        prop_assert_eq!(back.hash(), s.hash());
        let cand = RepresentationCandidate { base: 2, atoms: BTreeMap::from([("a".to_string(), vec![vec![0u8, 1]])]) };
        prop_assert_eq!(RepresentationCandidate::from_json_str(&cand.to_json_string()).unwrap(), cand);
    }
}
