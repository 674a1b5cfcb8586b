use proptest::prelude::*;
use twistor_core::lagrangian::{
    canonical_plane, hermitian_signature, index_from_signature, is_real_lagrangian, j_to_plane, plane_to_j,
};
use twistor_core::linalg::{max_abs, RMat};
use twistor_core::symplectic::{canonical_structure, random_sp, standard_form};
use twistor_core::CompatibleStructure;

fn structure(n: usize, l: usize, seed: u64) -> CompatibleStructure {
    let g = random_sp(n, seed).unwrap();
    let g_inv: RMat = g.clone().try_inverse().unwrap();
    CompatibleStructure::standard(&g * canonical_structure(n, l).unwrap() * g_inv).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plane_round_trip(n in 1usize..=3, l_raw in 0usize..4, seed in any::<u64>()) {
        let l = l_raw % (n + 1);
        let j = structure(n, l, seed);
        let w = j_to_plane(&j).unwrap();
        prop_assert!(is_real_lagrangian(&w, j.form()));
        let back = plane_to_j(&w, j.form()).unwrap();
        prop_assert!(max_abs(&(back.matrix() - j.matrix())) <= 1e-8);
        prop_assert_eq!(back.index(), l);
        prop_assert_eq!(index_from_signature(hermitian_signature(&w, j.form()).unwrap()), l);
    }

    #[test]
    fn conjugate_plane_is_not_a_structure_of_the_same_index(n in 1usize..=3, seed in any::<u64>()) {
        // W̄ is the +i eigenspace; its J is -J, of index n - l.
        let j = structure(n, 0, seed);
        let w = j_to_plane(&j).unwrap();
        let flipped = plane_to_j(&w.conjugate(), j.form()).unwrap();
        prop_assert!(max_abs(&(flipped.matrix() + j.matrix())) <= 1e-8);
        prop_assert_eq!(flipped.index(), n);
    }
}

#[test]
fn canonical_planes_map_to_canonical_structures() {
    for n in 1..=4 {
        let form = standard_form(n).unwrap();
        for l in 0..=n {
            let j = plane_to_j(&canonical_plane(n, l).unwrap(), &form).unwrap();
            assert!(max_abs(&(j.matrix() - canonical_structure(n, l).unwrap())) < 1e-14, "n={n} l={l}");
        }
    }
}
