use num_bigint::BigUint;
use proptest::prelude::*;

use dupzero_core::channel::{apply, apply_duplication, apply_zero_insertion, output_set_with, reachable_runs, Backend, Budget};
use dupzero_core::codebook::Codebook;
use dupzero_core::{
    confusable, decode, decode_run, phi, phi_inverse, ChannelParams, InsertionPattern, Model, Symbol, Word,
};

fn params() -> impl Strategy<Value = ChannelParams> {
    (2u32..=5, 1u32..=4, 1u32..=3).prop_map(|(q, ell, r)| ChannelParams::finite(q, ell, r).unwrap())
}

fn word_for(p: ChannelParams, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..p.q() as Symbol, len).prop_map(Word::new)
}

/// A word starting with a nonzero symbol.
fn run_word(p: ChannelParams, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Word> {
    (1..p.q() as Symbol, word_for(p, len)).prop_map(|(head, tail)| {
        let mut s = vec![head];
        s.extend_from_slice(tail.symbols());
        Word::new(s)
    })
}

fn pattern(p: ChannelParams, len: usize, frozen: usize) -> impl Strategy<Value = InsertionPattern> {
    let r = p.r().finite().unwrap();
    prop::collection::vec(0..=r, len).prop_map(move |mut c| {
        c.iter_mut().take(frozen).for_each(|x| *x = 0);
        InsertionPattern::new(c)
    })
}

fn codeword(p: ChannelParams, n: usize) -> impl Strategy<Value = (Codebook, Word)> {
    let cb = Codebook::new(p, n).unwrap();
    let size = cb.size();
    let top = u64::try_from(&size).unwrap_or(u64::MAX);
    (0..top).prop_map(move |k| {
        let w = cb.unrank(&BigUint::from(k)).unwrap();
        (cb.clone(), w)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn phi_is_a_bijection((p, x) in params().prop_flat_map(|p| (Just(p), word_for(p, 0..=30)))) {
        prop_assert_eq!(phi_inverse(&p, &phi(&p, &x)), x.clone());
        prop_assert_eq!(phi(&p, &phi_inverse(&p, &x)), x);
    }

    #[test]
    fn duplication_is_zero_insertion_under_phi(
        (p, xt, pat) in params()
            .prop_flat_map(|p| (Just(p), word_for(p, 1..=12)))
            .prop_flat_map(|(p, xt)| {
                let len = xt.len();
                (Just(p), Just(xt), pattern(p, len, p.ell() as usize - 1))
            })
    ) {
        let y = apply_duplication(&p, &xt, &pat).unwrap();
        let z = apply_zero_insertion(&p, &phi(&p, &xt), &pat).unwrap();
        prop_assert_eq!(phi(&p, &y), z);
    }

    #[test]
    fn insertions_grow_length_by_blocks(
        (p, x, pat) in params()
            .prop_flat_map(|p| (Just(p), run_word(p, 0..=10)))
            .prop_flat_map(|(p, x)| { let len = x.len(); (Just(p), Just(x), pattern(p, len, 0)) })
    ) {
        let z = apply(&p, &x, &pat, Model::ZeroInsertion).unwrap();
        prop_assert_eq!(z.len() as u64, x.len() as u64 + u64::from(p.ell()) * pat.total());
        prop_assert_eq!(z.weight(), x.weight());
    }

    #[test]
    fn decoder_inverts_the_channel(
        (p, (_cb, x), pat) in params()
            .prop_flat_map(|p| (Just(p), 1usize..=14))
            .prop_flat_map(|(p, n)| (Just(p), codeword(p, n)))
            .prop_flat_map(|(p, cw)| { let len = cw.1.len(); (Just(p), Just(cw), pattern(p, len, 0)) })
    ) {
        let z = apply_zero_insertion(&p, &x, &pat).unwrap();
        prop_assert_eq!(decode(&p, &z).unwrap(), x);
    }

    #[test]
    fn decoder_output_is_a_fixed_point((p, z) in params().prop_flat_map(|p| (Just(p), run_word(p, 0..=25)))) {
        let x = decode(&p, &z).unwrap();
        prop_assert!(x.len() <= z.len());
        prop_assert_eq!(x.weight(), z.weight());
        prop_assert_eq!(decode(&p, &x).unwrap(), x.clone());
        prop_assert!(Codebook::new(p, x.len()).unwrap().contains(&x));
    }

    #[test]
    fn decoded_runs_are_reachable_from_below(p in params(), u in 0u64..5000) {
        let d = decode_run(&p, u);
        prop_assert!(d.run <= u);
        prop_assert_eq!((u - d.run) % u64::from(p.ell()), 0);
        prop_assert!(reachable_runs(&p, d.run as usize).unwrap().contains(u as usize));
    }

    #[test]
    fn rank_unrank_round_trip((_p, (cb, x)) in params().prop_flat_map(|p| (Just(p), 1usize..=40)).prop_flat_map(|(p, n)| (Just(p), codeword(p, n)))) {
        let k = cb.rank(&x).unwrap();
        prop_assert!(k < cb.size());
        prop_assert_eq!(cb.unrank(&k).unwrap(), x);
    }

    #[test]
    fn confusability_is_symmetric_and_reflexive(
        (p, x, y) in params().prop_flat_map(|p| (Just(p), run_word(p, 0..=6), run_word(p, 0..=6)))
    ) {
        for model in [Model::ZeroInsertion, Model::Duplication] {
            prop_assert!(confusable(&p, &x, &x, model).unwrap());
            prop_assert_eq!(confusable(&p, &x, &y, model).unwrap(), confusable(&p, &y, &x, model).unwrap());
        }
    }

    #[test]
    fn output_set_contains_every_applied_pattern(
        (p, x, pat) in params()
            .prop_flat_map(|p| (Just(p), run_word(p, 0..=5)))
            .prop_flat_map(|(p, x)| { let len = x.len(); (Just(p), Just(x), pattern(p, len, 0)) })
    ) {
        let budget = Budget { max_extra_len: 128, ..Budget::default() };
        let set = output_set_with(&p, &x, Model::ZeroInsertion, Backend::RunArithmetic, &budget).unwrap();
        prop_assert!(set.contains(&apply_zero_insertion(&p, &x, &pat).unwrap()));
    }
}
