//! DFA minimization in two phases: reachability analysis, which produces
//! access words, and state merging, which produces separating suffixes.
//! Splitting trees give a second route to the same quotient.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dfa::Dfa;
use crate::word::{Symbol, Word};

/// Shortest access words of the reachable states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessSet {
    /// Access word of each state of the reachable part, by new id.
    pub words: Vec<Word>,
    /// Id of each reachable state in the input DFA, by new id.
    pub states: Vec<usize>,
}

/// Suffixes that separate every pair of inequivalent states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorSet {
    pub words: Vec<Word>,
}

/// Restriction to the states reachable from the initial one, renumbered in
/// breadth-first order with symbols in alphabet order.
pub fn reachable_part(d: &Dfa) -> (Dfa, AccessSet) {
    let (order, words) = d.bfs();
    (d.canonical(), AccessSet { words, states: order })
}

fn signatures(d: &Dfa, suffixes: &[Word]) -> Vec<Vec<bool>> {
    (0..d.size()).map(|q| suffixes.iter().map(|e| d.accepts_from(q, e)).collect()).collect()
}

/// Quotient by a partition given as a class id per state. Classes are
/// numbered by their least state, which also represents the class.
fn quotient(d: &Dfa, class_of: &[usize]) -> Dfa {
    let mut rename = BTreeMap::new();
    let mut reps = Vec::new();
    for (q, &c) in class_of.iter().enumerate() {
        rename.entry(c).or_insert_with(|| {
            reps.push(q);
            reps.len() - 1
        });
    }
    let state = |q: usize| rename[&class_of[q]];
    Dfa::from_fn(
        d.alphabet().clone(),
        reps.len(),
        state(d.initial()),
        |c| d.is_accepting(reps[c]),
        |c, a| state(d.next(reps[c], a)),
    )
    .expect("quotient of a valid DFA is valid")
}

/// Class of each state, named by its least member.
fn classes_by_signature(sigs: &[Vec<bool>]) -> Vec<usize> {
    let mut first: BTreeMap<&[bool], usize> = BTreeMap::new();
    sigs.iter().enumerate().map(|(q, s)| *first.entry(s.as_slice()).or_insert(q)).collect()
}

/// Moore's reduction phrased as consistency fixing: starting from
/// `E = {ε}`, while two states with equal signatures over `E` have
/// successors on some `a` that differ on some `e`, add `a·e` to `E`.
/// Pairs are scanned in id order, then symbols, then suffixes in `E` order.
pub fn moore_merge(d: &Dfa) -> (Dfa, SeparatorSet) {
    let mut suffixes = vec![Word::empty()];
    loop {
        let sigs = signatures(d, &suffixes);
        let class = classes_by_signature(&sigs);
        match first_inconsistency(d, &sigs, &class) {
            Some((a, j)) => suffixes.push(suffixes[j].prepend(a)),
            None => return (quotient(d, &class), SeparatorSet { words: suffixes }),
        }
    }
}

/// `(a, j)` for the first inconsistent pair, where `E[j]` tells the
/// `a`-successors apart.
fn first_inconsistency(d: &Dfa, sigs: &[Vec<bool>], class: &[usize]) -> Option<(Symbol, usize)> {
    let step = |q: usize| -> Vec<&Vec<bool>> { d.alphabet().symbols().map(|a| &sigs[d.next(q, a)]).collect() };
    // Within a class, equality of successor signatures is an equivalence,
    // so the first inconsistent pair starts at the least member of a class
    // that is not uniform.
    for q1 in 0..d.size() {
        if class[q1] != q1 {
            continue;
        }
        let s1 = step(q1);
        if let Some(q2) = (q1 + 1..d.size()).find(|&q| class[q] == q1 && step(q) != s1) {
            let s2 = step(q2);
            let a = (0..s1.len()).find(|&a| s1[a] != s2[a]).expect("successors differ");
            let j = (0..s1[a].len()).find(|&j| s1[a][j] != s2[a][j]).expect("signatures differ");
            return Some((a, j));
        }
    }
    None
}

/// Reachable part, then state merging. The result is reachable and
/// observable.
pub fn minimize(d: &Dfa) -> Dfa {
    minimize_with_sets(d).0
}

/// Minimal DFA with the access words of its states and a separator set
/// that pairwise separates them.
pub fn minimize_with_sets(d: &Dfa) -> (Dfa, AccessSet, SeparatorSet) {
    let (reach, _) = reachable_part(d);
    let (merged, separators) = moore_merge(&reach);
    let (min, access) = reachable_part(&merged);
    (min, access, separators)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Inner { label: Word, left: usize, right: usize },
    Leaf { states: Vec<usize> },
}

/// Binary tree over the states of a DFA. Inner nodes carry words; a state
/// is below the left child of `v` iff it accepts `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingTree {
    nodes: Vec<Node>,
    parents: Vec<Option<usize>>,
    leaf_of: Vec<usize>,
}

impl SplittingTree {
    fn new(states: usize) -> Self {
        SplittingTree {
            nodes: vec![Node::Leaf { states: (0..states).collect() }],
            parents: vec![None],
            leaf_of: vec![0; states],
        }
    }

    /// Tree obtained by splitting every leaf with the words of `separators`
    /// in order, skipping words that do not split a leaf.
    pub fn from_separators(d: &Dfa, separators: &[Word]) -> Self {
        let mut t = SplittingTree::new(d.size());
        for e in separators {
            for leaf in t.leaves().collect::<Vec<_>>() {
                t.split(leaf, e, |q| d.accepts_from(q, e));
            }
        }
        t
    }

    /// Splits `leaf` by `pred`; does nothing when one side would be empty.
    fn split(&mut self, leaf: usize, label: &Word, pred: impl Fn(usize) -> bool) -> bool {
        let Node::Leaf { states } = &self.nodes[leaf] else {
            return false;
        };
        let (yes, no): (Vec<usize>, Vec<usize>) = states.iter().partition(|&&q| pred(q));
        if yes.is_empty() || no.is_empty() {
            return false;
        }
        let (left, right) = (self.nodes.len(), self.nodes.len() + 1);
        for &q in &yes {
            self.leaf_of[q] = left;
        }
        for &q in &no {
            self.leaf_of[q] = right;
        }
        self.nodes.push(Node::Leaf { states: yes });
        self.nodes.push(Node::Leaf { states: no });
        self.parents.push(Some(leaf));
        self.parents.push(Some(leaf));
        self.nodes[leaf] = Node::Inner { label: label.clone(), left, right };
        true
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| matches!(self.nodes[i], Node::Leaf { .. }))
    }

    pub fn states(&self, leaf: usize) -> &[usize] {
        match &self.nodes[leaf] {
            Node::Leaf { states } => states,
            Node::Inner { .. } => &[],
        }
    }

    pub fn leaf_of(&self, q: usize) -> usize {
        self.leaf_of[q]
    }

    pub fn label(&self, node: usize) -> Option<&Word> {
        match &self.nodes[node] {
            Node::Inner { label, .. } => Some(label),
            Node::Leaf { .. } => None,
        }
    }

    fn ancestors(&self, node: usize) -> Vec<usize> {
        let mut out = vec![node];
        while let Some(p) = self.parents[*out.last().unwrap()] {
            out.push(p);
        }
        out
    }

    fn lowest_common_ancestor(&self, nodes: &[usize]) -> usize {
        let mut common = self.ancestors(nodes[0]);
        for &n in &nodes[1..] {
            let other = self.ancestors(n);
            common.retain(|x| other.contains(x));
        }
        common[0]
    }

    /// Labels on the path from the root to the leaf of `q`, root first.
    pub fn path_labels(&self, q: usize) -> Vec<Word> {
        let mut labels: Vec<Word> = self.ancestors(self.leaf_of[q])[1..]
            .iter()
            .map(|&n| self.label(n).expect("ancestors are inner nodes").clone())
            .collect();
        labels.reverse();
        labels
    }

    /// Quotient of `d` by the leaf partition.
    pub fn quotient(&self, d: &Dfa) -> Dfa {
        quotient(d, &self.leaf_of)
    }

    /// Indented dump: `? v` for inner nodes (left child first), `[q1, q2]`
    /// for leaves.
    pub fn dump(&self, d: &Dfa) -> String {
        let mut out = String::new();
        let mut stack = vec![(0usize, 0usize)];
        while let Some((node, depth)) = stack.pop() {
            for _ in 0..depth {
                out.push_str("  ");
            }
            match &self.nodes[node] {
                Node::Inner { label, left, right } => {
                    out.push_str("? ");
                    out.push_str(&d.alphabet().render(label));
                    stack.push((*right, depth + 1));
                    stack.push((*left, depth + 1));
                }
                Node::Leaf { states } => {
                    out.push('[');
                    for (i, q) in states.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        out.push_str(&alloc::format!("{q}"));
                    }
                    out.push(']');
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Partition refinement with a splitting tree. The root is split on `ε`;
/// afterwards, whenever the `a`-successors of a block fall into different
/// leaves, the whole block is split at once by `a·u`, where `u` labels the
/// lowest common ancestor of those leaves.
pub fn splitting_tree_minimize(d: &Dfa) -> (Dfa, SplittingTree) {
    let mut t = SplittingTree::new(d.size());
    t.split(0, &Word::empty(), |q| d.is_accepting(q));
    'refine: loop {
        for leaf in t.leaves().collect::<Vec<_>>() {
            let block = t.states(leaf).to_vec();
            for a in d.alphabet().symbols() {
                let mut targets: Vec<usize> = block.iter().map(|&q| t.leaf_of(d.next(q, a))).collect();
                targets.sort_unstable();
                targets.dedup();
                if targets.len() > 1 {
                    let u = t.label(t.lowest_common_ancestor(&targets)).unwrap().clone();
                    let v = u.prepend(a);
                    let split = t.split(leaf, &v, |q| d.accepts_from(q, &v));
                    debug_assert!(split);
                    continue 'refine;
                }
            }
        }
        break;
    }
    (t.quotient(d), t)
}
