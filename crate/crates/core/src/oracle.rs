//! Brute-force checks: the confusability graph on `S_q(n)`, exact maximum
//! independent sets, and pairwise zero-error verification of a code.
//!
//! Nothing here uses the block construction, so these results can be
//! compared against the codebook.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::channel::{output_set_with, Backend, Budget, Model, RunProfile};
use crate::error::{Error, Result};
use crate::transform::phi;
use crate::word::{ChannelParams, SpaceSq, Symbol, Word};

pub const DEFAULT_GRAPH_BUDGET: usize = 20_000;
pub const DEFAULT_MIS_BUDGET: usize = 2_000;

/// Words of `S_q(n)` in canonical order, joined when confusable.
#[derive(Clone, Debug)]
pub struct ConfusabilityGraph {
    pub params: ChannelParams,
    pub n: usize,
    pub model: Model,
    vertices: Vec<Word>,
    /// Sorted neighbour lists.
    adj: Vec<Vec<usize>>,
}

impl ConfusabilityGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        let pos = self.vertices.partition_point(|v| (v.len(), v) < (w.len(), w));
        (self.vertices.get(pos) == Some(w)).then_some(pos)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ns) in self.adj.iter().enumerate() {
            out.extend(ns.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(k, &a)| set[k + 1..].iter().all(|&b| a != b && !self.has_edge(a, b)))
    }
}

/// Confusability graph with the run-arithmetic backend and default budget.
pub fn build_graph(params: &ChannelParams, n: usize, model: Model) -> Result<ConfusabilityGraph> {
    build_graph_with(params, n, model, Backend::RunArithmetic, DEFAULT_GRAPH_BUDGET)
}

/// With [`Backend::Enumerate`] edges come from explicitly shared outputs;
/// with [`Backend::RunArithmetic`] from the per-run interval test.
pub fn build_graph_with(
    params: &ChannelParams,
    n: usize,
    model: Model,
    backend: Backend,
    max_vertices: usize,
) -> Result<ConfusabilityGraph> {
    params.finite_r("confusability graph")?;
    let space = SpaceSq::new(*params, n)?;
    let size = space.size();
    if size > max_vertices as u128 {
        return Err(Error::BudgetExceeded { what: "confusability graph", size, limit: max_vertices as u128 });
    }
    let vertices: Vec<Word> = space.words().collect();
    let adj = match backend {
        Backend::RunArithmetic => adjacency_by_runs(params, &vertices, model),
        Backend::Enumerate => adjacency_by_outputs(params, &vertices, model)?,
    };
    Ok(ConfusabilityGraph { params: *params, n, model, vertices, adj })
}

fn profiles(params: &ChannelParams, words: &[Word], model: Model) -> Vec<RunProfile> {
    let frozen = model.frozen_prefix(params);
    words
        .par_iter()
        .map(|w| match model {
            Model::ZeroInsertion => RunProfile::new(w, frozen),
            Model::Duplication => RunProfile::new(&phi(params, w), frozen),
        })
        .collect()
}

/// Groups indices by nonzero-symbol sequence; only words in the same group
/// can be confusable. Groups and their members keep input order.
fn buckets(profiles: &[RunProfile]) -> Vec<Vec<usize>> {
    let mut index: HashMap<&[Symbol], usize> = HashMap::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, p) in profiles.iter().enumerate() {
        let slot = *index.entry(p.symbols()).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[slot].push(i);
    }
    out
}

fn adjacency_by_runs(params: &ChannelParams, words: &[Word], model: Model) -> Vec<Vec<usize>> {
    let r = params.r().finite().expect("checked by caller");
    let ell = params.ell();
    let profs = profiles(params, words, model);
    let groups = buckets(&profs);
    let mut adj = vec![Vec::new(); words.len()];
    let lists: Vec<Vec<(usize, Vec<usize>)>> = groups
        .par_iter()
        .map(|g| {
            g.iter()
                .map(|&a| (a, g.iter().copied().filter(|&b| b != a && profs[a].confusable(&profs[b], r, ell)).collect()))
                .collect()
        })
        .collect();
    for (a, ns) in lists.into_iter().flatten() {
        adj[a] = ns;
    }
    adj
}

fn adjacency_by_outputs(params: &ChannelParams, words: &[Word], model: Model) -> Result<Vec<Vec<usize>>> {
    let sets = words
        .par_iter()
        .map(|w| output_set_with(params, w, model, Backend::Enumerate, &Budget::default()))
        .collect::<Result<Vec<_>>>()?;
    let mut owners: HashMap<&Word, Vec<usize>> = HashMap::new();
    for (i, s) in sets.iter().enumerate() {
        for y in &s.words {
            owners.entry(y).or_default().push(i);
        }
    }
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); words.len()];
    for group in owners.values() {
        for &a in group {
            adj[a].extend(group.iter().copied().filter(|&b| b != a));
        }
    }
    Ok(adj
        .into_iter()
        .map(|s| {
            let mut v: Vec<usize> = s.into_iter().collect();
            v.sort_unstable();
            v
        })
        .collect())
}

/// Size and a witness of a maximum independent set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisResult {
    pub size: usize,
    /// Vertex indices, ascending.
    pub witness: Vec<usize>,
    /// Branch-and-bound nodes visited.
    pub nodes: u64,
}

impl MisResult {
    pub fn words<'a>(&self, g: &'a ConfusabilityGraph) -> Vec<&'a Word> {
        self.witness.iter().map(|&v| &g.vertices[v]).collect()
    }
}

pub fn max_independent_set(g: &ConfusabilityGraph) -> Result<MisResult> {
    max_independent_set_with(g, DEFAULT_MIS_BUDGET)
}

/// Exact MIS: each connected component is solved separately by branch and
/// bound, branching on the closed neighbourhood of a minimum-degree vertex
/// and pruning with a greedy clique cover.
pub fn max_independent_set_with(g: &ConfusabilityGraph, max_vertices: usize) -> Result<MisResult> {
    if g.len() > max_vertices {
        return Err(Error::BudgetExceeded {
            what: "maximum independent set",
            size: g.len() as u128,
            limit: max_vertices as u128,
        });
    }
    let mut witness = Vec::new();
    let mut nodes = 0;
    for comp in components(g) {
        let mut solver = Component::new(g, &comp);
        let best = solver.solve();
        nodes += solver.nodes;
        witness.extend(best.into_iter().map(|k| comp[k]));
    }
    witness.sort_unstable();
    if !g.is_independent(&witness) {
        return Err(Error::Invariant("MIS witness is not independent".into()));
    }
    Ok(MisResult { size: witness.len(), witness, nodes })
}

fn components(g: &ConfusabilityGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.len()];
    let mut out = Vec::new();
    for start in 0..g.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut k = 0;
        while k < comp.len() {
            for &b in g.neighbors(comp[k]) {
                if !seen[b] {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

type Bits = Vec<u64>;

fn first(set: &Bits) -> Option<usize> {
    set.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
}

fn members(set: &Bits) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
    })
}

fn and_not(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & !y).collect()
}

fn and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn count(set: &Bits) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

struct Component {
    /// Open neighbourhoods in local indices.
    nbr: Vec<Bits>,
    /// Closed neighbourhoods.
    closed: Vec<Bits>,
    best: Vec<usize>,
    nodes: u64,
}

impl Component {
    fn new(g: &ConfusabilityGraph, comp: &[usize]) -> Self {
        let words = comp.len().div_ceil(64);
        let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut nbr = vec![vec![0u64; words]; comp.len()];
        for (k, &v) in comp.iter().enumerate() {
            for b in g.neighbors(v) {
                let j = local[b];
                nbr[k][j / 64] |= 1 << (j % 64);
            }
        }
        let closed = nbr
            .iter()
            .enumerate()
            .map(|(k, n)| {
                let mut c = n.clone();
                c[k / 64] |= 1 << (k % 64);
                c
            })
            .collect();
        Component { nbr, closed, best: Vec::new(), nodes: 0 }
    }

    fn solve(&mut self) -> Vec<usize> {
        let n = self.nbr.len();
        let mut all = vec![0u64; n.div_ceil(64)];
        for k in 0..n {
            all[k / 64] |= 1 << (k % 64);
        }
        // Greedy start: repeatedly take the lowest-degree remaining vertex.
        let mut rest = all.clone();
        let mut greedy = Vec::new();
        while count(&rest) > 0 {
            let v = members(&rest).min_by_key(|&v| count(&and(&self.nbr[v], &rest))).expect("nonempty");
            greedy.push(v);
            rest = and_not(&rest, &self.closed[v]);
        }
        self.best = greedy;
        let mut current = Vec::new();
        self.search(&all, &mut current);
        let mut best = self.best.clone();
        best.sort_unstable();
        best
    }

    /// Upper bound on the MIS of `cand`: the size of a greedy clique cover.
    fn cover_bound(&self, cand: &Bits) -> usize {
        let mut rest = cand.clone();
        let mut cliques = 0;
        while let Some(v) = first(&rest) {
            let mut reach = and(&rest, &self.nbr[v]);
            rest[v / 64] &= !(1 << (v % 64));
            while let Some(u) = first(&reach) {
                rest[u / 64] &= !(1 << (u % 64));
                reach = and(&reach, &self.nbr[u]);
            }
            cliques += 1;
        }
        cliques
    }

    fn search(&mut self, cand: &Bits, current: &mut Vec<usize>) {
        self.nodes += 1;
        let size = count(cand);
        if size == 0 {
            if current.len() > self.best.len() {
                self.best = current.clone();
            }
            return;
        }
        if current.len() + size <= self.best.len() || current.len() + self.cover_bound(cand) <= self.best.len() {
            return;
        }
        let (v, deg) = members(cand)
            .map(|v| (v, count(&and(&self.nbr[v], cand))))
            .min_by_key(|&(v, d)| (d, v))
            .expect("nonempty");
        // Some maximum independent set meets N[v]; if deg(v) ≤ 1, one
        // contains v itself.
        let choices: Vec<usize> =
            if deg <= 1 { vec![v] } else { members(&and(&self.closed[v], cand)).collect() };
        for u in choices {
            current.push(u);
            let next = and_not(cand, &self.closed[u]);
            self.search(&next, current);
            current.pop();
        }
    }
}

/// Outcome of [`brute_zero_error_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroErrorReport {
    pub ok: bool,
    /// The first confusable pair `(code[i], code[j])`, `i < j`, in code order.
    pub witness: Option<(Word, Word)>,
    pub pairs_checked: u64,
}

/// Checks every pair of distinct codewords for confusability.
pub fn brute_zero_error_check(params: &ChannelParams, code: &[Word], model: Model) -> Result<ZeroErrorReport> {
    let r = params.finite_r("zero-error check")?;
    for w in code {
        params.check_word(w)?;
    }
    let ell = params.ell();
    let profs = profiles(params, code, model);
    let groups = buckets(&profs);
    let results: Vec<(Option<(usize, usize)>, u64)> = groups
        .par_iter()
        .map(|g| {
            let mut checked = 0;
            for (k, &a) in g.iter().enumerate() {
                for &b in &g[k + 1..] {
                    checked += 1;
                    if code[a] == code[b] || profs[a].confusable(&profs[b], r, ell) {
                        return (Some((a, b)), checked);
                    }
                }
            }
            (None, checked)
        })
        .collect();
    let pairs_checked = results.iter().map(|x| x.1).sum();
    let first = results.iter().filter_map(|x| x.0).min();
    Ok(ZeroErrorReport {
        ok: first.is_none(),
        witness: first.map(|(a, b)| (code[a].clone(), code[b].clone())),
        pairs_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::Codebook;

    fn w(s: &str) -> Word {
        Word::parse(s, 10).unwrap()
    }

    fn p(q: u32, ell: u32, r: u32) -> ChannelParams {
        ChannelParams::finite(q, ell, r).unwrap()
    }

    #[test]
    fn small_graph() {
        let g = build_graph(&p(2, 1, 1), 3, Model::ZeroInsertion).unwrap();
        let names: Vec<String> = g.vertices().iter().map(|v| v.to_text(2)).collect();
        assert_eq!(names, ["1", "10", "11", "100", "101", "110", "111"]);
        let (a, b, c) = (g.index_of(&w("10")).unwrap(), g.index_of(&w("100")).unwrap(), g.index_of(&w("1")).unwrap());
        assert!(g.has_edge(a, b) && g.has_edge(b, a));
        assert!(!g.has_edge(c, b));
        assert!(g.index_of(&w("1000")).is_none());
        let mis = max_independent_set(&g).unwrap();
        assert_eq!(mis.size, 4);
        assert!(g.is_independent(&mis.witness));
    }

    #[test]
    fn trivial_graph() {
        let g = build_graph(&p(2, 1, 1), 1, Model::ZeroInsertion).unwrap();
        let mis = max_independent_set(&g).unwrap();
        assert_eq!(mis.words(&g), [&w("1")]);
        let g3 = build_graph(&p(3, 1, 1), 1, Model::ZeroInsertion).unwrap();
        assert_eq!(max_independent_set(&g3).unwrap().size, 2);
    }

    #[test]
    fn backends_give_the_same_graph() {
        for (q, ell, r) in [(2, 1, 1), (2, 2, 1), (3, 1, 2), (2, 2, 2)] {
            for model in [Model::ZeroInsertion, Model::Duplication] {
                let a = build_graph_with(&p(q, ell, r), 6, model, Backend::RunArithmetic, 5000).unwrap();
                let b = build_graph_with(&p(q, ell, r), 6, model, Backend::Enumerate, 5000).unwrap();
                assert_eq!(a.edges(), b.edges(), "q={q} ell={ell} r={r} {model}");
            }
        }
    }

    #[test]
    fn mis_matches_brute_force_on_small_graphs() {
        // Exhaustive subset search over each component.
        for (q, ell, r, n) in [(2, 1, 1, 5), (2, 2, 1, 6), (3, 1, 1, 4), (2, 1, 2, 5)] {
            let g = build_graph(&p(q, ell, r), n, Model::ZeroInsertion).unwrap();
            let mut total = 0;
            for comp in components(&g) {
                assert!(comp.len() <= 20);
                let best = (0u32..1 << comp.len())
                    .filter(|mask| {
                        let set: Vec<usize> = (0..comp.len()).filter(|k| mask >> k & 1 == 1).map(|k| comp[k]).collect();
                        g.is_independent(&set)
                    })
                    .map(|m| m.count_ones())
                    .max()
                    .unwrap();
                total += best as usize;
            }
            assert_eq!(max_independent_set(&g).unwrap().size, total);
        }
    }

    #[test]
    fn budgets() {
        assert!(matches!(
            build_graph_with(&p(2, 1, 1), 15, Model::ZeroInsertion, Backend::RunArithmetic, 20_000),
            Err(Error::BudgetExceeded { .. })
        ));
        let g = build_graph(&p(2, 1, 1), 6, Model::ZeroInsertion).unwrap();
        assert!(max_independent_set_with(&g, 10).is_err());
        assert!(build_graph(&ChannelParams::unbounded(2, 1).unwrap(), 3, Model::ZeroInsertion).is_err());
    }

    #[test]
    fn zero_error_checks() {
        let params = p(2, 1, 1);
        let code = Codebook::new(params, 10).unwrap().enumerate(10_000).unwrap();
        let rep = brute_zero_error_check(&params, &code, Model::ZeroInsertion).unwrap();
        assert!(rep.ok && rep.witness.is_none());
        let bad = brute_zero_error_check(&params, &[w("10"), w("100")], Model::ZeroInsertion).unwrap();
        assert!(!bad.ok);
        assert_eq!(bad.witness, Some((w("10"), w("100"))));
        let first = brute_zero_error_check(&params, &[w("11"), w("1"), w("10"), w("100")], Model::ZeroInsertion).unwrap();
        assert_eq!(first.witness, Some((w("1"), w("10"))));
        assert!(brute_zero_error_check(&params, &[w("101")], Model::ZeroInsertion).unwrap().ok);
        let dup = brute_zero_error_check(&params, &[w("11"), w("111")], Model::Duplication).unwrap();
        assert!(!dup.ok);
    }

    #[test]
    fn codewords_are_independent() {
        for (q, ell, r) in [(2, 1, 1), (2, 2, 1), (3, 1, 2)] {
            let params = p(q, ell, r);
            let g = build_graph(&params, 7, Model::ZeroInsertion).unwrap();
            let cb = Codebook::new(params, 7).unwrap();
            let set: Vec<usize> = (0..g.len()).filter(|&v| cb.contains(&g.vertices()[v])).collect();
            assert!(g.is_independent(&set));
        }
    }
}
