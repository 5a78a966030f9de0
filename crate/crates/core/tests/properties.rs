//! Cross-module invariants: catalog soundness, the derived-operator
//! closure and functoriality, canonical keys against an isomorphism oracle,
//! and move invariance of coloring counts.

use vbq_core::algebra::{
    derive_vr, derive_vr_virtual, is_homomorphism, linear_biquandle, swap_operator,
    validate_biquandle, validate_virtual, wada_from_group, Biquandle, OperatorTable,
    VirtualBiquandle,
};
use vbq_core::braid::{
    braid_to_gauss, conjugate, random_braid, stabilize, Generator, Stabilization,
};
use vbq_core::coloring::{act_braid, count_colorings, theta, theta_inv, RepKind, SearchOptions};
use vbq_core::enumeration::{
    canonical_key, enumerate_biquandles, enumerate_virtual, permutations, relabel_operator,
    CatalogOptions,
};
use vbq_core::gauss::color_gauss;

fn z_n_table(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|a| (0..n).map(|b| (a + b) % n).collect())
        .collect()
}

/// A spread of small virtual biquandles from the named families, carriers
/// of size 3 through 6.
fn named_virtuals() -> Vec<VirtualBiquandle> {
    let s3: Vec<Vec<usize>> = {
        // S3 as permutations of {0,1,2} composed left to right
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let compose = |p: [usize; 3], q: [usize; 3]| [q[p[0]], q[p[1]], q[p[2]]];
        (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| {
                        let c = compose(perms[a], perms[b]);
                        perms.iter().position(|p| *p == c).unwrap()
                    })
                    .collect()
            })
            .collect()
    };
    // conjugation by the transposition at index 2 is a group automorphism
    // of S3 and therefore an automorphism of its Wada operator
    let g = 2usize;
    let g_inv = (0..6).find(|&y| s3[g][y] == 0).unwrap();
    let inner: Vec<usize> = (0..6).map(|x| s3[s3[g_inv][x]][g]).collect();
    vec![
        VirtualBiquandle::new(linear_biquandle(3, 1, 2).unwrap(), vec![1, 2, 0]).unwrap(),
        VirtualBiquandle::plain(linear_biquandle(3, 1, 2).unwrap()).unwrap(),
        VirtualBiquandle::new(wada_from_group(&z_n_table(3)).unwrap(), vec![0, 2, 1]).unwrap(),
        VirtualBiquandle::new(swap_operator(3), vec![2, 0, 1]).unwrap(),
        VirtualBiquandle::new(linear_biquandle(4, 1, 3).unwrap(), vec![1, 2, 3, 0]).unwrap(),
        VirtualBiquandle::new(linear_biquandle(5, 1, 2).unwrap(), vec![1, 2, 3, 4, 0]).unwrap(),
        VirtualBiquandle::new(wada_from_group(&s3).unwrap(), inner).unwrap(),
    ]
}

#[test]
fn catalog_structures_satisfy_all_axioms_and_fixed_pair_invariants() {
    for n in 1..=3 {
        for op in enumerate_biquandles(n, &CatalogOptions::default()).unwrap() {
            let report = validate_biquandle(&op);
            assert!(report.passed(), "{report}");
            let bq = Biquandle::new(op.clone()).unwrap();
            // the fixed-point set of R on X^2 has exactly n elements and
            // projects bijectively to both coordinates
            let fixed: Vec<(usize, usize)> = (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .filter(|&(x, y)| op.apply(x, y) == (x, y))
                .collect();
            assert_eq!(fixed.len(), n);
            let mut lefts: Vec<usize> = fixed.iter().map(|p| p.0).collect();
            let mut rights: Vec<usize> = fixed.iter().map(|p| p.1).collect();
            lefts.sort();
            rights.sort();
            assert_eq!(lefts, (0..n).collect::<Vec<_>>());
            assert_eq!(rights, (0..n).collect::<Vec<_>>());
            for (a, x) in bq.fixed_pairs() {
                assert!(fixed.contains(&(*x, *a)));
            }
        }
    }
}

#[test]
fn derived_operator_stays_in_the_class() {
    // over the enumerated virtual catalogs
    for n in 1..=3 {
        for (op, f) in enumerate_virtual(n, &CatalogOptions::default()).unwrap() {
            let vbq = VirtualBiquandle::new(op, f.clone()).unwrap();
            let vr = derive_vr(&vbq);
            assert!(validate_biquandle(&vr).passed());
            assert!(validate_virtual(&vr, &f).unwrap().passed());
        }
    }
    // and over the named families up to size 5
    for vbq in named_virtuals() {
        let vr = derive_vr(&vbq);
        assert!(validate_biquandle(&vr).passed());
        assert!(validate_virtual(&vr, vbq.f_slice()).unwrap().passed());
    }
}

#[test]
fn derived_operator_construction_is_functorial() {
    // every homomorphism between small virtual biquandles is also a
    // homomorphism between the derived structures
    let mut structures = Vec::new();
    for n in 2..=3 {
        for (op, f) in enumerate_virtual(n, &CatalogOptions::default()).unwrap() {
            structures.push(VirtualBiquandle::new(op, f).unwrap());
        }
    }
    let mut homs_checked = 0usize;
    for src in &structures {
        for dst in &structures {
            let mut map = vec![0usize; src.n()];
            loop {
                if is_homomorphism(&map, src, dst) {
                    let vr_src = derive_vr_virtual(src);
                    let vr_dst = derive_vr_virtual(dst);
                    assert!(is_homomorphism(&map, &vr_src, &vr_dst));
                    homs_checked += 1;
                }
                if !next_tuple(&mut map, dst.n()) {
                    break;
                }
            }
        }
    }
    assert!(homs_checked > 0);
}

fn next_tuple(t: &mut [usize], m: usize) -> bool {
    for slot in t.iter_mut().rev() {
        *slot += 1;
        if *slot < m {
            return true;
        }
        *slot = 0;
    }
    false
}

#[test]
fn vr_maps_virtual_catalog_into_biquandle_catalog() {
    for n in 1..=3 {
        let keys: std::collections::BTreeSet<_> =
            enumerate_biquandles(n, &CatalogOptions::default())
                .unwrap()
                .iter()
                .map(|op| canonical_key(op, None))
                .collect();
        for (op, f) in enumerate_virtual(n, &CatalogOptions::default()).unwrap() {
            let vbq = VirtualBiquandle::new(op, f).unwrap();
            let vr = derive_vr(&vbq);
            assert!(keys.contains(&canonical_key(&vr, None)));
        }
    }
}

#[test]
fn canonical_key_agrees_with_isomorphism_oracle() {
    for n in 2..=3 {
        let catalog = enumerate_biquandles(n, &CatalogOptions::default()).unwrap();
        let keys: Vec<_> = catalog.iter().map(|op| canonical_key(op, None)).collect();
        for (i, a) in catalog.iter().enumerate() {
            for (j, b) in catalog.iter().enumerate() {
                // oracle: search all relabelings directly
                let isomorphic = permutations(n)
                    .into_iter()
                    .any(|p| relabel_operator(a, &p) == *b);
                assert_eq!(
                    keys[i] == keys[j],
                    isomorphic,
                    "structures {i} and {j} at size {n}"
                );
            }
        }
    }
}

#[test]
fn enumeration_complete_against_sideways_oracle_at_size_three() {
    // independent completeness oracle: every (row-permutation R1, column
    // permutation R2) pair run through the full validator
    let n = 3;
    let perms = permutations(n);
    let mut expected = std::collections::BTreeSet::new();
    for rows in 0..perms.len().pow(n as u32) {
        let mut idx = rows;
        let mut r1 = Vec::new();
        for _ in 0..n {
            r1.push(perms[idx % perms.len()].clone());
            idx /= perms.len();
        }
        for cols in 0..perms.len().pow(n as u32) {
            let mut idx = cols;
            let mut colv = Vec::new();
            for _ in 0..n {
                colv.push(perms[idx % perms.len()].clone());
                idx /= perms.len();
            }
            let r2: Vec<Vec<usize>> = (0..n)
                .map(|x| (0..n).map(|y| colv[y][x]).collect())
                .collect();
            let op = OperatorTable::from_rows(&r1, &r2).unwrap();
            if validate_biquandle(&op).passed() {
                expected.insert(op.flat());
            }
        }
    }
    let got: std::collections::BTreeSet<_> = enumerate_biquandles(n, &CatalogOptions::default())
        .unwrap()
        .iter()
        .map(|op| op.flat())
        .collect();
    assert_eq!(got, expected);
}

#[test]
fn representation_property_on_random_words() {
    let opts = SearchOptions::default();
    let _ = opts;
    for vbq in named_virtuals() {
        for seed in 0..10 {
            let b1 = random_braid(3, 5, seed);
            let b2 = random_braid(3, 5, seed + 500);
            let both = b1.concat(&b2);
            for rep in [RepKind::Phi, RepKind::Psi] {
                let mut t = vec![0usize; 3];
                loop {
                    let direct = act_braid(&vbq, &both, rep, &t);
                    let staged = act_braid(&vbq, &b2, rep, &act_braid(&vbq, &b1, rep, &t));
                    assert_eq!(direct, staged);
                    if !next_tuple(&mut t, vbq.n()) {
                        break;
                    }
                }
            }
        }
    }
}

#[test]
fn psi_is_theta_conjugate_of_phi_pointwise() {
    for vbq in named_virtuals() {
        for seed in 0..20 {
            let b = random_braid(3, 8, seed);
            let mut t = vec![0usize; 3];
            loop {
                let via_psi = act_braid(&vbq, &b, RepKind::Psi, &t);
                let via_conj = theta(
                    &vbq,
                    &act_braid(&vbq, &b, RepKind::Phi, &theta_inv(&vbq, &t)),
                );
                assert_eq!(via_psi, via_conj, "word {b}");
                if !next_tuple(&mut t, vbq.n()) {
                    break;
                }
            }
        }
    }
}

#[test]
fn coloring_counts_invariant_under_closure_preserving_moves() {
    let opts = SearchOptions::default();
    for vbq in [
        VirtualBiquandle::new(linear_biquandle(3, 1, 2).unwrap(), vec![1, 2, 0]).unwrap(),
        VirtualBiquandle::new(wada_from_group(&z_n_table(3)).unwrap(), vec![0, 2, 1]).unwrap(),
    ] {
        for seed in 0..12 {
            let b = random_braid(3, 6, seed);
            for rep in [RepKind::Phi, RepKind::Psi] {
                let base = count_colorings(&vbq, &b, rep, &opts).unwrap().count;
                for i in 1..b.strands() {
                    for g in [
                        Generator::Sigma(i),
                        Generator::SigmaInv(i),
                        Generator::Rho(i),
                    ] {
                        let moved = conjugate(&b, g);
                        assert_eq!(
                            count_colorings(&vbq, &moved, rep, &opts).unwrap().count,
                            base,
                            "conjugation by {g} on {b}"
                        );
                    }
                }
                for kind in [Stabilization::Pos, Stabilization::Neg, Stabilization::Virt] {
                    let moved = stabilize(&b, kind);
                    assert_eq!(
                        count_colorings(&vbq, &moved, rep, &opts).unwrap().count,
                        base,
                        "stabilization {kind:?} on {b}"
                    );
                }
            }
        }
    }
}

#[test]
fn gauss_solver_agrees_with_psi_counts_on_random_words() {
    let opts = SearchOptions::default();
    for vbq in named_virtuals() {
        for seed in 100..112 {
            let b = random_braid(4, 8, seed);
            let code = braid_to_gauss(&b);
            assert_eq!(
                color_gauss(&vbq, &code, &opts).unwrap().count,
                count_colorings(&vbq, &b, RepKind::Psi, &opts)
                    .unwrap()
                    .count,
                "word {b}"
            );
        }
    }
}
