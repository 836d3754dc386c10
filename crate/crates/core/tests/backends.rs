use std::collections::BTreeSet;

use dupzero_core::channel::{confusable_with, output_set_with, Backend, Budget};
use dupzero_core::codebook::Codebook;
use dupzero_core::oracle::{brute_zero_error_check, build_graph, build_graph_with, max_independent_set};
use dupzero_core::{for_each_output, ChannelParams, Model, SpaceSq, Word};

fn grid() -> Vec<ChannelParams> {
    let mut out = Vec::new();
    for (q, ell, r) in [(2, 1, 1), (2, 1, 2), (3, 1, 1), (2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 3, 1)] {
        out.push(ChannelParams::finite(q, ell, r).unwrap());
    }
    out
}

#[test]
fn output_sets_agree_across_backends() {
    let budget = Budget::default();
    for p in grid() {
        let max_len = if p.q() == 3 { 6 } else { 8 };
        let space = SpaceSq::new(p, max_len).unwrap();
        for x in space.words() {
            for model in [Model::ZeroInsertion, Model::Duplication] {
                let a = output_set_with(&p, &x, model, Backend::Enumerate, &budget).unwrap();
                let b = output_set_with(&p, &x, model, Backend::RunArithmetic, &budget).unwrap();
                assert_eq!(a.words, b.words, "{p} {model} {x:?}");
                let mut streamed = BTreeSet::new();
                for_each_output(&p, &x, model, |z| {
                    streamed.insert(Word::from(z));
                })
                .unwrap();
                assert_eq!(streamed, a.words);
            }
        }
    }
}

#[test]
fn confusability_agrees_across_backends() {
    let budget = Budget::default();
    for p in grid() {
        let words: Vec<Word> = SpaceSq::new(p, 5).unwrap().words().collect();
        for x in &words {
            for y in words.iter().filter(|y| y.len() >= x.len()) {
                for model in [Model::ZeroInsertion, Model::Duplication] {
                    let a = confusable_with(&p, x, y, model, Backend::Enumerate, &budget).unwrap();
                    let b = confusable_with(&p, x, y, model, Backend::RunArithmetic, &budget).unwrap();
                    assert_eq!(a, b, "{p} {model} {x:?} {y:?}");
                }
            }
        }
    }
}

#[test]
fn graphs_agree_across_backends() {
    for p in grid().into_iter().filter(|p| p.q() == 2) {
        for model in [Model::ZeroInsertion, Model::Duplication] {
            let a = build_graph_with(&p, 6, model, Backend::Enumerate, 20_000).unwrap();
            let b = build_graph_with(&p, 6, model, Backend::RunArithmetic, 20_000).unwrap();
            assert_eq!(a.edges(), b.edges(), "{p} {model}");
        }
    }
}

#[test]
fn code_is_a_maximum_independent_set() {
    for p in grid() {
        let max_n = if p.q() == 3 { 5 } else { 7 };
        for n in 1..=max_n {
            let cb = Codebook::new(p, n).unwrap();
            let code = cb.enumerate(1_000_000).unwrap();
            assert!(brute_zero_error_check(&p, &code, Model::ZeroInsertion).unwrap().ok);
            let g = build_graph(&p, n, Model::ZeroInsertion).unwrap();
            let idx: Vec<usize> = code.iter().map(|w| g.index_of(w).unwrap()).collect();
            assert!(g.is_independent(&idx));
            let mis = max_independent_set(&g).unwrap();
            assert_eq!(mis.size, code.len(), "{p} n = {n}");
        }
    }
}
