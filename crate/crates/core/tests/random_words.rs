//! Property tests over arbitrary braid words and Gauss-code fragments.

use proptest::prelude::*;
use vbq_core::algebra::{
    derive_vr, linear_biquandle, parse_structure, render_structure, OperatorTable, VirtualBiquandle,
};
use vbq_core::braid::{braid_to_gauss, BraidWord, GaussCode, Generator, Passage};
use vbq_core::coloring::{act_braid, count_colorings, RepKind, SearchOptions};
use vbq_core::gauss::{build_semiarc_graph, color_gauss, gauss_presentation};
use vbq_core::terms::{count_homs, eval_term, make_presentation, push_f_inward, symbolic_action};

fn generator_strategy(strands: usize) -> impl Strategy<Value = Generator> {
    (0..3usize, 1..strands).prop_map(|(kind, i)| match kind {
        0 => Generator::Sigma(i),
        1 => Generator::SigmaInv(i),
        _ => Generator::Rho(i),
    })
}

fn word_strategy(strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec(generator_strategy(strands), 0..=max_len)
        .prop_map(move |letters| BraidWord::new(strands, letters).unwrap())
}

fn test_structure() -> VirtualBiquandle {
    VirtualBiquandle::new(linear_biquandle(3, 1, 2).unwrap(), vec![1, 2, 0]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_codes_from_braids_are_well_formed(b in word_strategy(4, 12)) {
        let code = braid_to_gauss(&b);
        prop_assert_eq!(code.token_count(), 2 * b.classical_letters());
        // reconstructing through the validating constructor re-checks the
        // pairing invariants
        prop_assert!(GaussCode::new(code.components().to_vec()).is_ok());
        // each id appears once per passage kind
        let overs = code
            .components()
            .iter()
            .flatten()
            .filter(|t| t.passage == Passage::Over)
            .count();
        prop_assert_eq!(overs, b.classical_letters());
    }

    #[test]
    fn gauss_code_text_round_trips(b in word_strategy(4, 10)) {
        let code = braid_to_gauss(&b);
        let text = code.to_string();
        if !text.is_empty() {
            let parsed = vbq_core::gauss::parse_gauss(&text).unwrap();
            prop_assert_eq!(parsed, code);
        }
    }

    #[test]
    fn word_inverse_acts_as_inverse(b in word_strategy(3, 8), t in prop::collection::vec(0..3usize, 3)) {
        let vbq = test_structure();
        let inv = b.inverse();
        for rep in [RepKind::Phi, RepKind::Psi] {
            let forward = act_braid(&vbq, &b, rep, &t);
            let back = act_braid(&vbq, &inv, rep, &forward);
            prop_assert_eq!(&back, &t);
        }
    }

    #[test]
    fn semiarc_count_equals_token_count_plus_free_circles(b in word_strategy(4, 10)) {
        let code = braid_to_gauss(&b);
        let graph = build_semiarc_graph(&code);
        prop_assert_eq!(
            graph.semiarc_count(),
            code.token_count() + graph.free_circles()
        );
    }

    #[test]
    fn counts_agree_across_all_routes(b in word_strategy(3, 8)) {
        // fixed points, homomorphisms of the presentation, and the Gauss
        // solver all count the same invariant
        let vbq = test_structure();
        let opts = SearchOptions::default();
        let psi = count_colorings(&vbq, &b, RepKind::Psi, &opts).unwrap().count;
        let phi = count_colorings(&vbq, &b, RepKind::Phi, &opts).unwrap().count;
        prop_assert_eq!(phi, psi);
        let homs = count_homs(&make_presentation(&b, RepKind::Psi), &vbq, &opts)
            .unwrap()
            .count;
        prop_assert_eq!(homs, psi);
        let gauss = color_gauss(&vbq, &braid_to_gauss(&b), &opts).unwrap().count;
        prop_assert_eq!(gauss, psi);
        let gauss_homs = count_homs(&gauss_presentation(&braid_to_gauss(&b)), &vbq, &opts)
            .unwrap()
            .count;
        prop_assert_eq!(gauss_homs, psi);
        // coloring by the derived operator as a plain structure is the same
        // count again
        let vr_plain = VirtualBiquandle::plain(derive_vr(&vbq)).unwrap();
        let vr = count_colorings(&vr_plain, &b, RepKind::Phi, &opts).unwrap().count;
        prop_assert_eq!(vr, psi);
    }

    #[test]
    fn structure_files_round_trip(
        n in 1..5usize,
        seed in any::<u64>(),
        with_f in any::<bool>(),
    ) {
        // arbitrary well-formed tables (axioms not required for the format)
        let mut rng = vbq_core::braid::SplitMix64::new(seed);
        let rows = |rng: &mut vbq_core::braid::SplitMix64| -> Vec<Vec<usize>> {
            (0..n)
                .map(|_| (0..n).map(|_| rng.below(n as u64) as usize).collect())
                .collect()
        };
        let r1 = rows(&mut rng);
        let r2 = rows(&mut rng);
        let op = OperatorTable::from_rows(&r1, &r2).unwrap();
        let f: Option<Vec<usize>> = with_f.then(|| {
            // random permutation by sorting random keys
            let mut idx: Vec<usize> = (0..n).collect();
            let keys: Vec<u64> = (0..n).map(|_| rng.next_u64()).collect();
            idx.sort_by_key(|&i| keys[i]);
            idx
        });
        let text = render_structure(&op, f.as_deref());
        let parsed = parse_structure(&text).unwrap();
        prop_assert_eq!(parsed.op, op);
        prop_assert_eq!(parsed.f, f);
    }

    #[test]
    fn pushed_terms_evaluate_identically(b in word_strategy(3, 8), assignment in prop::collection::vec(0..3usize, 3)) {
        let vbq = test_structure();
        for rep in [RepKind::Phi, RepKind::Psi] {
            for term in symbolic_action(&b, rep) {
                let pushed = push_f_inward(&term);
                prop_assert_eq!(
                    eval_term(&term, &assignment, &vbq),
                    eval_term(&pushed, &assignment, &vbq)
                );
            }
        }
    }
}
