//! Counting-function checks: oracle equivalence on small balls, the
//! Lipschitz and splitting bounds at sampled scale, and value ranges.

use cqm_core::qm::{ball, GroupModel, OracleIndex, Pattern};
use cqm_core::{
    build_group, c_w, c_w_inv, check_embedding, h_w, AWord, AmalgamFamily, AmalgamPresentation,
    GroupSpec, HWord, HnnFamily, HnnPresentation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn psl2z() -> AmalgamPresentation {
    let a = build_group(&GroupSpec::Cyclic(3)).unwrap();
    let b = build_group(&GroupSpec::Cyclic(2)).unwrap();
    let c = build_group(&GroupSpec::Cyclic(1)).unwrap();
    let ia = check_embedding(&c, &a, &[0]).unwrap();
    let ib = check_embedding(&c, &b, &[0]).unwrap();
    AmalgamPresentation::new(a, b, c, ia, ib).unwrap()
}

fn sl2z() -> AmalgamPresentation {
    let a = build_group(&GroupSpec::Cyclic(6)).unwrap();
    let b = build_group(&GroupSpec::Cyclic(4)).unwrap();
    let c = build_group(&GroupSpec::Cyclic(2)).unwrap();
    let ia = check_embedding(&c, &a, &[0, 3]).unwrap();
    let ib = check_embedding(&c, &b, &[0, 2]).unwrap();
    AmalgamPresentation::new(a, b, c, ia, ib).unwrap()
}

fn klein_hnn() -> HnnPresentation {
    let a = build_group(&GroupSpec::Product(vec![
        GroupSpec::Cyclic(2),
        GroupSpec::Cyclic(2),
    ]))
    .unwrap();
    HnnPresentation::new(a, &[0, 1], &[(1, 2)]).unwrap()
}

/// All reduced pattern words of the given lengths whose square is reduced.
fn admissible_patterns<M: GroupModel>(model: &M, lengths: &[usize]) -> Vec<Vec<M::Letter>> {
    let gens = model.generators();
    let max = *lengths.iter().max().unwrap();
    let mut frontier: Vec<Vec<M::Letter>> = vec![Vec::new()];
    let mut out = Vec::new();
    for len in 1..=max {
        let mut next = Vec::new();
        for w in &frontier {
            for &g in &gens {
                let mut w2 = w.clone();
                w2.push(g);
                next.push(w2);
            }
        }
        if lengths.contains(&len) {
            for w in &next {
                let mut square = w.clone();
                square.extend_from_slice(w);
                if model.is_reduced_word(&square) {
                    out.push(w.clone());
                }
            }
        }
        frontier = next;
    }
    out
}

#[test]
fn oracle_equivalence_amalgam_small() {
    let pres = psl2z();
    let patterns = admissible_patterns(&pres, &[2, 4]);
    assert!(!patterns.is_empty());
    let index = OracleIndex::build(&pres, 6, 10_000_000).unwrap();
    for g in ball(&pres, 3) {
        for pw in &patterns {
            let pat = Pattern::new(&pres, pw.clone()).unwrap();
            let dp = c_w(&pres, &g, &pat);
            let oracle = index.c_w(&pres, &g, pw).unwrap();
            assert_eq!(dp, oracle, "c_w mismatch at g={g:?}");
            let dp_inv = c_w_inv(&pres, &g, &pat);
            let inv = GroupModel::inverse_word(&pres, pw);
            let oracle_inv = index.c_w(&pres, &g, &inv).unwrap();
            assert_eq!(dp_inv, oracle_inv, "c_w_inv mismatch at g={g:?}");
        }
    }
}

#[test]
fn oracle_equivalence_hnn_small() {
    let pres = klein_hnn();
    let patterns = admissible_patterns(&pres, &[2, 3]);
    assert!(!patterns.is_empty());
    let index = OracleIndex::build(&pres, 4, 10_000_000).unwrap();
    for g in ball(&pres, 2) {
        for pw in &patterns {
            let pat = Pattern::new(&pres, pw.clone()).unwrap();
            let dp = c_w(&pres, &g, &pat);
            let oracle = index.c_w(&pres, &g, pw).unwrap();
            assert_eq!(dp, oracle, "c_w mismatch at g={g:?} w={pw:?}");
        }
    }
}

#[test]
fn lipschitz_bounds_sampled() {
    for pres in [psl2z(), sl2z()] {
        let fam = AmalgamFamily::new(&pres, 1, 2, 1, 1).unwrap();
        let w0 = fam.word(0).unwrap();
        let pat = Pattern::new(&pres, w0.letters().to_vec()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..150 {
            let x = pres.element(&AWord::from_letters(GroupModel::random_word(
                &pres, &mut rng, 15,
            )));
            let y = pres.element(&AWord::from_letters(GroupModel::random_word(
                &pres, &mut rng, 15,
            )));
            let d = pres.geodesic_length(&pres.mul_elements(&pres.inverse_element(&x), &y)) as i64;
            let dc = (c_w(&pres, &x, &pat) - c_w(&pres, &y, &pat)).abs();
            assert!(dc <= 2 * d, "c Lipschitz violated: {dc} > 2*{d}");
            let dh = (h_w(&pres, &x, &pat) - h_w(&pres, &y, &pat)).abs();
            assert!(dh <= 4 * d, "h Lipschitz violated: {dh} > 4*{d}");
        }
    }
}

#[test]
fn splitting_bound_sampled_amalgam() {
    let pres = sl2z();
    let fam = AmalgamFamily::new(&pres, 1, 2, 1, 1).unwrap();
    let w0 = fam.word(0).unwrap();
    let pat = Pattern::new(&pres, w0.letters().to_vec()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..150 {
        let len = rng.gen_range(2..=24);
        let alpha = pres.random_reduced_word(&mut rng, len);
        let cut = rng.gen_range(1..len);
        let left = AWord::from_letters(alpha.letters()[..cut].to_vec());
        let right = AWord::from_letters(alpha.letters()[cut..].to_vec());
        let g = pres.element(&alpha);
        let g1 = pres.element(&left);
        let g2 = pres.element(&right);
        let gap =
            (h_w(&pres, &g, &pat) - h_w(&pres, &g1, &pat) - h_w(&pres, &g2, &pat)).abs();
        assert!(gap <= 10, "splitting bound violated: {gap} > 10");
    }
}

#[test]
fn splitting_bound_sampled_hnn() {
    let pres = klein_hnn();
    let fam = HnnFamily::new(&pres, 2, 1, 1).unwrap();
    let w0 = fam.word(0).unwrap();
    let pat = Pattern::new(&pres, w0.letters().to_vec()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(56);
    for _ in 0..100 {
        let len = rng.gen_range(2..=18);
        let alpha = pres.random_reduced_word(&mut rng, len, 0);
        let cut = rng.gen_range(1..len);
        let left = HWord::from_letters(alpha.letters()[..cut].to_vec());
        let right = HWord::from_letters(alpha.letters()[cut..].to_vec());
        let g = pres.element(&alpha);
        let g1 = pres.element(&left);
        let g2 = pres.element(&right);
        let gap =
            (h_w(&pres, &g, &pat) - h_w(&pres, &g1, &pat) - h_w(&pres, &g2, &pat)).abs();
        assert!(gap <= 10, "splitting bound violated: {gap} > 10");
    }
}

#[test]
fn nonoverlap_counts_family_words() {
    let pres = sl2z();
    let fam = AmalgamFamily::new(&pres, 1, 2, 1, 1).unwrap();
    let w0 = fam.word(0).unwrap();
    assert_eq!(
        cqm_core::count_nonoverlap(w0.pow(2).letters(), w0.letters()),
        2
    );
    assert_eq!(
        cqm_core::count_nonoverlap(w0.letters(), w0.pow(2).letters()),
        0
    );
}

#[test]
fn qm_value_bundles_both_directions() {
    let pres = psl2z();
    let pat = Pattern::new(&pres, pres.parse_word("A:1 B:1").unwrap().letters().to_vec())
        .unwrap();
    let g = pres.element(&pres.parse_word("A:1 B:1 A:1 B:1").unwrap());
    let v = cqm_core::qm_value(&pres, &g, &pat);
    assert_eq!(v.c_plus, 2);
    assert_eq!(v.c_minus, 0);
    assert_eq!(v.h, 2);
    assert_eq!(v.h, v.c_plus - v.c_minus);
    // Range invariant from the definition.
    assert!(v.c_plus >= 0 && v.c_plus <= (pres.geodesic_length(&g) / pat.len()) as i64);
}

#[test]
fn counting_range_invariant() {
    let pres = sl2z();
    let fam = AmalgamFamily::new(&pres, 1, 2, 1, 1).unwrap();
    let w0 = fam.word(0).unwrap();
    let pat = Pattern::new(&pres, w0.letters().to_vec()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..60 {
        let len = rng.gen_range(0..=90);
        let g = pres.element(&AWord::from_letters(GroupModel::random_word(
            &pres, &mut rng, len,
        )));
        let c = c_w(&pres, &g, &pat);
        let glen = pres.geodesic_length(&g) as i64;
        assert!(c >= 0);
        assert!(c <= glen / pat.len() as i64);
    }
}
