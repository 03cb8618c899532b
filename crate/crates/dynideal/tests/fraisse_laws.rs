use std::collections::{BTreeMap, BTreeSet};
use std::sync::LazyLock;

use dynideal::fraisse::{
    amalgamate, amalgamation_positions, check_amalgam, check_heredity, check_invariance, conjugation_witness, pure_host,
    random_case, substructures, vector_host, FinStructure, Label, Signature,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SIGS: [Signature; 3] = [Signature::PureSet, Signature::Ultrametric, Signature::VectorSpace { q: 2 }];

static POSITIONS: LazyLock<Vec<(FinStructure, FinStructure)>> =
    LazyLock::new(|| SIGS.iter().flat_map(|s| amalgamation_positions(*s, 3, 3)).collect());

fn shuffle_onto(labels: &BTreeSet<Label>, base: Label, rng: &mut ChaCha8Rng) -> BTreeMap<Label, Label> {
    let mut img: Vec<Label> = (0..labels.len() as Label).map(|i| base + i).collect();
    img.shuffle(rng);
    labels.iter().copied().zip(img).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn amalgams_obey_the_laws(i in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let (a, b) = &POSITIONS[i.index(POSITIONS.len())];
        let r = amalgamate(a, b).unwrap();
        prop_assert_eq!(check_amalgam(a, b, &r), Ok(()));
        if let Signature::VectorSpace { .. } = a.signature() {
            let common: BTreeSet<Label> = a.universe().intersection(b.universe()).copied().collect();
            prop_assert_eq!(r.amalgam.dim() + a.restrict(&common).unwrap().dim(), a.dim() + b.dim());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let common: BTreeSet<Label> = a.universe().intersection(b.universe()).copied().collect();
        let phi = shuffle_onto(a.universe(), 100, &mut rng);
        let mut psi: BTreeMap<Label, Label> = common.iter().map(|x| (*x, phi[x])).collect();
        let rest: BTreeSet<Label> = b.universe().difference(&common).copied().collect();
        psi.extend(shuffle_onto(&rest, 200, &mut rng));
        prop_assert!(check_invariance(a, b, &phi, &psi).unwrap());
        for s in substructures(a).into_iter().filter(|s| common.is_subset(s)) {
            prop_assert!(check_heredity(&s, a, b).unwrap());
        }
    }
}

#[test]
fn conjugation_recomposes_on_pure_and_vector_hosts() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in [pure_host(12), vector_host(2, 6)] {
        for _ in 0..20 {
            let (a, b, pi) = random_case(&m, &mut rng);
            let w = conjugation_witness(&m, &a, &b, &pi, true).unwrap();
            assert_eq!(w.verify(), Ok(()));
            assert!(w.e.is_superset(&b));
        }
    }
}
