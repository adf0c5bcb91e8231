//! Decorated trees indexing the torus-fixed loci of M̄_{0,m}(ℙ^{n−1}, d).

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeEdge {
    pub ends: (usize, usize),
    pub degree: usize,
}

/// A tree with vertex labels in 0..n, positive edge degrees and marked-point attachments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecoratedTree {
    pub labels: Vec<usize>,
    pub edges: Vec<TreeEdge>,
    /// `marks[j]` is the vertex carrying marked point j.
    pub marks: Vec<usize>,
    /// Order of the automorphism group of the decorated tree.
    pub aut: u64,
}

impl DecoratedTree {
    /// Validates the decorations and fills in |Aut|.
    pub fn new(labels: Vec<usize>, edges: Vec<TreeEdge>, marks: Vec<usize>) -> Result<Self> {
        let v = labels.len();
        if v == 0 || edges.len() + 1 != v {
            return Err(Error::InvalidParams(format!("{} edges cannot span {v} vertices", edges.len())));
        }
        let mut reached = vec![false; v];
        reached[0] = true;
        let mut stack = vec![0];
        let mut t = Self { labels, edges, marks, aut: 1 };
        while let Some(x) = stack.pop() {
            for (_, y) in t.flags(x) {
                if !reached[y] {
                    reached[y] = true;
                    stack.push(y);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(Error::InvalidParams("edges do not form a tree".into()));
        }
        for e in &t.edges {
            if e.degree == 0 || e.ends.0 >= v || e.ends.1 >= v {
                return Err(Error::InvalidParams(format!("malformed edge {e:?}")));
            }
            if t.labels[e.ends.0] == t.labels[e.ends.1] {
                return Err(Error::InvalidParams(format!("edge {:?} joins equal labels", e.ends)));
            }
        }
        if t.marks.iter().any(|&x| x >= v) {
            return Err(Error::InvalidParams("mark on a missing vertex".into()));
        }
        t.aut = t.canonical().1;
        Ok(t)
    }

    pub fn degree(&self) -> usize {
        self.edges.iter().map(|e| e.degree).sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// (edge index, far vertex) for every edge at `v`.
    pub fn flags(&self, v: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(k, e)| match e.ends {
                (x, y) if x == v => Some((k, y)),
                (x, y) if y == v => Some((k, x)),
                _ => None,
            })
            .collect()
    }

    pub fn marks_at(&self, v: usize) -> Vec<usize> {
        (0..self.marks.len()).filter(|&j| self.marks[j] == v).collect()
    }

    /// Canonical string of the subtree hanging from `v` away from `parent`, with its rooted |Aut|.
    fn rooted(&self, v: usize, parent: Option<usize>) -> (String, u64) {
        let mut children: Vec<(String, u64)> = self
            .flags(v)
            .into_iter()
            .filter(|&(_, w)| Some(w) != parent)
            .map(|(k, w)| {
                let (s, aut) = self.rooted(w, Some(v));
                (format!("{}:{s}", self.edges[k].degree), aut)
            })
            .collect();
        children.sort();
        let mut aut: u64 = children.iter().map(|c| c.1).product();
        let mut run = 1u64;
        for w in children.windows(2) {
            if w[0].0 == w[1].0 {
                run += 1;
                aut *= run;
            } else {
                run = 1;
            }
        }
        let marks: Vec<String> = self.marks_at(v).iter().map(usize::to_string).collect();
        let kids: Vec<&str> = children.iter().map(|c| c.0.as_str()).collect();
        (format!("[{}|{}|{}]", self.labels[v], marks.join(","), kids.join(",")), aut)
    }

    /// Canonical form and |Aut|. Rooted at the vertex of the first mark; unmarked trees take
    /// the least rooted form and multiply by the number of roots attaining it.
    pub fn canonical(&self) -> (String, u64) {
        if let Some(&root) = self.marks.first() {
            return self.rooted(root, None);
        }
        let forms: Vec<(String, u64)> = (0..self.vertex_count()).map(|v| self.rooted(v, None)).collect();
        let least = forms.iter().min().expect("nonempty tree");
        let orbit = forms.iter().filter(|f| f.0 == least.0).count() as u64;
        (least.0.clone(), least.1 * orbit)
    }
}

/// Upper bound on the degree accepted by the enumerators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeGuard(pub usize);

impl Default for DegreeGuard {
    fn default() -> Self {
        DegreeGuard(3)
    }
}

impl DegreeGuard {
    pub fn check(self, d: usize) -> Result<()> {
        if d > self.0 {
            return Err(Error::Guard(format!("degree {d} exceeds the enumeration limit {}", self.0)));
        }
        Ok(())
    }
}

/// Edge list of the labelled tree with Prüfer sequence `code` on `code.len() + 2` vertices.
fn prufer_decode(code: &[usize]) -> Vec<(usize, usize)> {
    let v = code.len() + 2;
    let mut degree = vec![1usize; v];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(v - 1);
    for &c in code {
        let leaf = (0..v).find(|&x| degree[x] == 1).expect("a leaf exists");
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..v).filter(|&x| degree[x] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Every tuple in 0..base of the given length, lexicographically.
fn tuples(base: usize, len: usize) -> Vec<Vec<usize>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                (0..base).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect()
    })
}

/// Ordered ways of writing `d` as `parts` positive integers.
fn compositions(d: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    (1..=d.saturating_sub(parts - 1))
        .flat_map(|first| {
            compositions(d - first, parts - 1).into_iter().map(move |mut t| {
                t.insert(0, first);
                t
            })
        })
        .collect()
}

fn decorate(shape: &[(usize, usize)], degrees: &[usize], labels: &[usize], marks: &[usize]) -> Option<DecoratedTree> {
    if shape.iter().any(|&(x, y)| labels[x] == labels[y]) {
        return None;
    }
    let edges = shape
        .iter()
        .zip(degrees)
        .map(|(&ends, &degree)| TreeEdge { ends, degree })
        .collect();
    Some(DecoratedTree {
        labels: labels.to_vec(),
        edges,
        marks: marks.to_vec(),
        aut: 1,
    })
}

/// Every vertex-labelled decorated tree, grouped by canonical form with its number of labellings.
pub(crate) fn labelled_classes(n: usize, d: usize, m: usize) -> BTreeMap<String, (DecoratedTree, u64)> {
    let mut classes: BTreeMap<String, (DecoratedTree, u64)> = BTreeMap::new();
    for v in 2..=d + 1 {
        let degree_lists = compositions(d, v - 1);
        let label_lists = tuples(n, v);
        let mark_lists = tuples(v, m);
        for code in tuples(v, v - 2) {
            let shape = prufer_decode(&code);
            for degrees in &degree_lists {
                for labels in &label_lists {
                    for marks in &mark_lists {
                        let Some(t) = decorate(&shape, degrees, labels, marks) else {
                            continue;
                        };
                        let key = t.canonical().0;
                        classes.entry(key).or_insert_with(|| (t, 0)).1 += 1;
                    }
                }
            }
        }
    }
    classes
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// One representative per isomorphism class of decorated trees of degree `d ≥ 1` with `m` marks,
/// ordered by canonical form. |Aut| comes from the rooted symmetry factorization and agrees with
/// V!/(number of vertex labellings of the class).
pub fn enumerate_trees(n: usize, d: usize, m: usize, guard: DegreeGuard) -> Result<Vec<DecoratedTree>> {
    guard.check(d)?;
    if d == 0 || n < 2 {
        return Err(Error::InvalidParams(format!("fixed-point trees need d ≥ 1 and n ≥ 2 (d = {d}, n = {n})")));
    }
    labelled_classes(n, d, m)
        .into_values()
        .map(|(t, count)| {
            let t = DecoratedTree::new(t.labels, t.edges, t.marks)?;
            debug_assert_eq!(t.aut * count, factorial(t.vertex_count()));
            Ok(t)
        })
        .collect()
}

/// Independent generator: random decorated trees, deduplicated by canonical form, until
/// `patience` consecutive draws produce nothing new.
pub fn sample_trees(n: usize, d: usize, m: usize, seed: u64, patience: usize) -> Result<BTreeMap<String, u64>> {
    if d == 0 || n < 2 {
        return Err(Error::InvalidParams("fixed-point trees need d ≥ 1 and n ≥ 2".into()));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut seen = BTreeMap::new();
    let mut stale = 0;
    while stale < patience {
        let v = rng.gen_range(2..=d + 1);
        let code: Vec<usize> = (0..v - 2).map(|_| rng.gen_range(0..v)).collect();
        let shape = prufer_decode(&code);
        let mut cuts: Vec<usize> = (1..d).collect();
        for k in (1..cuts.len()).rev() {
            cuts.swap(k, rng.gen_range(0..=k));
        }
        let mut cuts: Vec<usize> = cuts.into_iter().take(v - 2).collect();
        cuts.sort_unstable();
        cuts.insert(0, 0);
        cuts.push(d);
        let degrees: Vec<usize> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
        let labels: Vec<usize> = (0..v).map(|_| rng.gen_range(0..n)).collect();
        let marks: Vec<usize> = (0..m).map(|_| rng.gen_range(0..v)).collect();
        let Some(t) = decorate(&shape, &degrees, &labels, &marks) else {
            continue;
        };
        let (key, aut) = t.canonical();
        if seen.insert(key, aut).is_none() {
            stale = 0;
        } else {
            stale += 1;
        }
    }
    Ok(seen)
}

/// Canonical forms of a list of trees.
pub fn canonical_set(trees: &[DecoratedTree]) -> BTreeSet<String> {
    trees.iter().map(|t| t.canonical().0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(n: usize, d: usize, m: usize) -> Vec<DecoratedTree> {
        enumerate_trees(n, d, m, DegreeGuard::default()).unwrap()
    }

    #[test]
    fn two_labels_one_edge_two_marks() {
        // labels {0, 1} on the two ends; each mark sits on either end
        let trees = all(2, 1, 2);
        assert_eq!(trees.len(), 4);
        assert!(trees.iter().all(|t| t.edges.len() == 1 && t.edges[0].degree == 1 && t.aut == 1));
    }

    #[test]
    fn degree_one_is_a_single_edge() {
        for (n, m) in [(3, 0), (3, 1), (4, 2), (4, 3)] {
            assert!(all(n, 1, m).iter().all(|t| t.edges.len() == 1 && t.edges[0].degree == 1));
        }
    }

    #[test]
    fn unmarked_counts() {
        // single edges {i, j} of degree d, and for d = 2 the paths i–j–k with i, k ≠ j
        assert_eq!(all(3, 1, 0).len(), 3);
        let two = all(3, 2, 0);
        assert_eq!(two.len(), 3 + 9);
        assert!(two.iter().filter(|t| t.edges.len() == 1).all(|t| t.aut == 1));
        // the paths i–j–i have a flip
        assert_eq!(two.iter().filter(|t| t.aut == 2).count(), 6);
    }

    #[test]
    fn automorphisms_match_labelling_counts() {
        for (n, d, m) in [(3, 2, 0), (3, 2, 1), (4, 3, 0), (3, 3, 1), (3, 2, 2)] {
            for (t, count) in labelled_classes(n, d, m).into_values() {
                let aut = t.canonical().1;
                assert_eq!(aut * count, factorial(t.vertex_count()), "{t:?}");
            }
        }
    }

    #[test]
    fn random_generator_agrees() {
        for (n, d, m) in [(3, 2, 2), (2, 1, 2), (3, 2, 0), (4, 2, 1), (3, 3, 0)] {
            let trees = all(n, d, m);
            let sampled = sample_trees(n, d, m, 11, 4000).unwrap();
            assert_eq!(canonical_set(&trees), sampled.keys().cloned().collect(), "n = {n}, d = {d}, m = {m}");
            for t in &trees {
                assert_eq!(sampled[&t.canonical().0], t.aut);
            }
        }
    }

    #[test]
    fn guard_and_validation() {
        assert!(matches!(enumerate_trees(3, 4, 0, DegreeGuard::default()), Err(Error::Guard(_))));
        assert!(enumerate_trees(3, 4, 0, DegreeGuard(4)).is_ok());
        let e = |a, b| TreeEdge { ends: (a, b), degree: 1 };
        assert!(DecoratedTree::new(vec![0, 0], vec![e(0, 1)], vec![]).is_err());
        assert!(DecoratedTree::new(vec![0, 1, 2], vec![e(0, 1), e(0, 1)], vec![]).is_err());
        assert_eq!(DecoratedTree::new(vec![1, 0, 1], vec![e(0, 1), e(1, 2)], vec![]).unwrap().aut, 2);
        assert_eq!(DecoratedTree::new(vec![1, 0, 1], vec![e(0, 1), e(1, 2)], vec![0]).unwrap().aut, 1);
    }
}
