use proptest::prelude::*;
use ratgroup::core::{equal, minimize, MachineDraft};
use ratgroup::gen::{gen_element, gen_machine, Generator, GeneratorSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn same_seed_same_tree(seed in any::<u64>(), depth in 0usize..4) {
        let spec = GeneratorSpec { seed, depth, ..Default::default() };
        prop_assert_eq!(gen_element(&spec).to_string(), gen_element(&spec).to_string());
    }

    #[test]
    fn elements_carry_inverse_machines(seed in any::<u64>()) {
        let e = gen_element(&GeneratorSpec { seed, depth: 3, ..Default::default() });
        let back = e.backward().expect("generated elements are invertible");
        let round = ratgroup::core::construct::compose_machines(back, e.forward());
        prop_assert!(equal(&round, &ratgroup::core::Transducer::identity()).unwrap());
    }

    #[test]
    fn machines_validate(seed in any::<u64>(), max_states in 1usize..10) {
        let m = gen_machine(&GeneratorSpec { seed, max_states, ..Default::default() });
        prop_assert!(MachineDraft::from(&m).validate().is_empty());
        prop_assert!(m.num_states() <= max_states);
    }

    #[test]
    fn obfuscation_keeps_canonical_form(seed in any::<u64>()) {
        let mut g = Generator::new(GeneratorSpec { seed, depth: 3, ..Default::default() });
        let e = g.any_element();
        let o = g.obfuscate(e.forward());
        let (a, b) = (minimize(&o).unwrap(), minimize(e.forward()).unwrap());
        prop_assert_eq!(a.machine(), b.machine());
    }
}
