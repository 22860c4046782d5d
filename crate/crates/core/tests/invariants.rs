use proptest::prelude::*;

use splitblur::blowup::{
    all_subsets, alpha_of_graph, blur_structure, f_l_mu, AtomStructureSpec, GraphScheme, SymbolicAtom, Truncation,
};
use splitblur::finite_ra::{check_axioms, default_atom_names, make_m};
use splitblur::graphs::{chromatic_number, make_disjoint_cliques, Coloring};
use splitblur::nonrep::{certify, check_certificate, CertificateError};
use splitblur::symbolic::CoarseBlock;

fn blur(k: usize) -> AtomStructureSpec {
    let m = make_m(&default_atom_names(k)).unwrap();
    blur_structure(&m, &all_subsets(k, 2)).unwrap()
}

fn atom(spec: &AtomStructureSpec) -> impl Strategy<Value = SymbolicAtom> {
    let cells = spec.as_blur().unwrap().cells();
    prop_oneof![
        1 => Just(SymbolicAtom::Identity),
        12 => (0..cells.len(), 0u32..30).prop_map(move |(c, row)| {
            let (blur, base) = cells[c];
            SymbolicAtom::Blur { row, blur, base }
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn consistency_is_permutation_invariant((a, b, c) in {
        let s = blur(6);
        (atom(&s), atom(&s), atom(&s))
    }) {
        let s = blur(6);
        let v = s.consistent(a, b, c);
        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            prop_assert_eq!(s.consistent(x, y, z), v);
        }
    }

    #[test]
    fn identity_law((b, c) in {
        let s = blur(7);
        (atom(&s), atom(&s))
    }) {
        let s = blur(7);
        prop_assert_eq!(s.consistent(SymbolicAtom::Identity, b, c), b == c);
    }

    #[test]
    fn same_base_triples_are_inconsistent((p, rows, blurs) in (0usize..6, prop::array::uniform3(0u32..40), prop::array::uniform3(0usize..5))) {
        let s = blur(6);
        let b = s.as_blur().unwrap();
        let with_p: Vec<usize> = (0..b.blur_count()).filter(|&w| b.blur(w).contains(p)).collect();
        let atoms: Vec<SymbolicAtom> = (0..3)
            .map(|i| SymbolicAtom::Blur { row: rows[i], blur: with_p[blurs[i]], base: p })
            .collect();
        prop_assert!(!s.consistent(atoms[0], atoms[1], atoms[2]));
    }
}

#[test]
fn truncations_satisfy_the_axioms() {
    for spec in [blur(6), blur(7), f_l_mu(&default_atom_names(6), 2, 1).unwrap()] {
        let t = spec.truncate(&Truncation::rows(4)).unwrap();
        assert!(check_axioms(&t.structure).is_clean());
    }
    let alpha = alpha_of_graph(GraphScheme::CliqueCopies { clique_size: 3 }, 3).unwrap();
    let t = alpha.truncate(&Truncation::cliques(3)).unwrap();
    assert_eq!(t.structure.atom_count(), 1 + 9 * 3);
    assert!(check_axioms(&t.structure).is_clean());
}

#[test]
fn certificates_are_byte_stable_and_checkable() {
    let spec = blur(7);
    let a = certify(&spec, None, Truncation::rows(5), 11).unwrap().to_json();
    let b = certify(&spec, None, Truncation::rows(5), 11).unwrap().to_json();
    assert_eq!(a, b);
    check_certificate(&a).unwrap();
    assert!(matches!(check_certificate("{"), Err(CertificateError::Malformed(_))));
    assert!(matches!(check_certificate("{}"), Err(CertificateError::Malformed(_))));
}

#[test]
fn certificate_names_the_flipped_block() {
    let scheme = GraphScheme::CliqueCopies { clique_size: 4 };
    let (_, c) = chromatic_number(&make_disjoint_cliques(10, 4));
    let spec = alpha_of_graph(scheme, 3).unwrap();
    let cert = certify(&spec, Some(&c), Truncation::cliques(10), 0).unwrap();
    assert_eq!(cert.blocks.len(), 4 * 3 + 1);
    let mut doc: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
    doc["mono_zero"][4]["zero"] = false.into();
    match check_certificate(&doc.to_string()) {
        Err(CertificateError::Reverification { field, block, .. }) => {
            assert_eq!(field, "mono_zero");
            assert_eq!(block, Some(5));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn improper_and_missing_colorings_are_rejected() {
    let spec = alpha_of_graph(GraphScheme::CliqueCopies { clique_size: 3 }, 3).unwrap();
    assert!(certify(&spec, Some(&Coloring::new(vec![0, 0, 1])), Truncation::cliques(1), 0).is_err());
    assert!(certify(&spec, None, Truncation::cliques(1), 0).is_err());
    assert!(certify(&blur(6), Some(&Coloring::new(vec![0])), Truncation::rows(2), 0).is_err());
}

#[test]
fn blur_blocks_are_by_base() {
    let cert = certify(&blur(8), None, Truncation::rows(3), 0).unwrap();
    let bases: Vec<usize> = cert
        .blocks
        .iter()
        .filter_map(|b| match b {
            CoarseBlock::Base { base } => Some(*base),
            _ => None,
        })
        .collect();
    assert_eq!(bases, (0..8).collect::<Vec<_>>());
    assert!(cert.flags.infinite_carrier && cert.flags.finite_partition);
}
