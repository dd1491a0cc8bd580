//! Classification trees.
//!
//! Internal nodes carry discriminator words, leaves carry the prefixes of
//! `S` that sift into them. A word sifts left at node `v` when `L(w·v) = 1`
//! and right otherwise. The leaf every sifted word reached is remembered, so
//! a split only has to re-sift the words recorded in the leaf being split.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::oracle::{MembershipOracle, Phase, QueryCache};
use crate::table::Hypothesis;
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Inner { label: Word, left: usize, right: usize },
    Leaf { members: Vec<Word> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeDefect {
    /// A word that sifts into an empty leaf (or `ε` itself).
    Closedness(Word),
    /// `first` and `second` share a leaf but are told apart by `suffix`.
    Consistency { first: Word, second: Word, suffix: Word },
}

/// Cost of one leaf split, next to the size of `S ∪ S·A` at that moment
/// (what adding a column to an observation table would cost).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitCost {
    pub prefixes: usize,
    pub rows: usize,
    pub queries: u64,
}

#[derive(Debug, Clone)]
pub struct ClassificationTree {
    alphabet: Alphabet,
    nodes: Vec<Node>,
    parents: Vec<Option<usize>>,
    prefixes: Vec<Word>,
    leaf_of: BTreeMap<Word, usize>,
    /// Every membership answer the tree has received.
    observed: BTreeMap<Word, bool>,
}

impl ClassificationTree {
    /// A single leaf holding `ε`.
    pub fn new(alphabet: &Alphabet) -> Self {
        let mut leaf_of = BTreeMap::new();
        leaf_of.insert(Word::empty(), 0);
        ClassificationTree {
            alphabet: alphabet.clone(),
            nodes: vec![Node::Leaf { members: vec![Word::empty()] }],
            parents: vec![None],
            prefixes: vec![Word::empty()],
            leaf_of,
            observed: BTreeMap::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn prefixes(&self) -> &[Word] {
        &self.prefixes
    }

    /// Ids of all leaves, in creation order.
    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| matches!(self.nodes[i], Node::Leaf { .. }))
    }

    /// Members of a leaf, in `S` order. Empty for internal nodes.
    pub fn members(&self, leaf: usize) -> &[Word] {
        match &self.nodes[leaf] {
            Node::Leaf { members } => members,
            Node::Inner { .. } => &[],
        }
    }

    /// Discriminator of an internal node.
    pub fn label(&self, node: usize) -> Option<&Word> {
        match &self.nodes[node] {
            Node::Inner { label, .. } => Some(label),
            Node::Leaf { .. } => None,
        }
    }

    /// Leaf a word was last sifted into, if it has been sifted.
    pub fn leaf_of(&self, w: &Word) -> Option<usize> {
        self.leaf_of.get(w).copied()
    }

    /// Number of distinct words in `S ∪ S·A`.
    pub fn row_count(&self) -> usize {
        let mut words: Vec<Word> = self.prefixes.clone();
        for s in &self.prefixes {
            for a in self.alphabet.symbols() {
                words.push(s.append(a));
            }
        }
        words.sort();
        words.dedup();
        words.len()
    }

    /// Membership of `w`, asked at most once per tree.
    fn member<O>(&mut self, w: &Word, mq: &mut QueryCache<O>) -> Result<bool>
    where
        O: MembershipOracle<Output = bool>,
    {
        if let Some(&b) = self.observed.get(w) {
            return Ok(b);
        }
        let b = mq.query(w)?;
        self.observed.insert(w.clone(), b);
        Ok(b)
    }

    pub fn sift<O>(&mut self, w: &Word, mq: &mut QueryCache<O>) -> Result<usize>
    where
        O: MembershipOracle<Output = bool>,
    {
        if let Some(&leaf) = self.leaf_of.get(w) {
            return Ok(leaf);
        }
        let mut node = 0;
        while let Node::Inner { label, left, right } = &self.nodes[node] {
            let (x, left, right) = (w.concat(label), *left, *right);
            node = if self.member(&x, mq)? { left } else { right };
        }
        self.leaf_of.insert(w.clone(), node);
        Ok(node)
    }

    /// Adds `w` to `S` and to the leaf it sifts into.
    pub fn add_prefix<O>(&mut self, w: Word, mq: &mut QueryCache<O>) -> Result<bool>
    where
        O: MembershipOracle<Output = bool>,
    {
        if self.prefixes.contains(&w) {
            return Ok(false);
        }
        let leaf = self.sift(&w, mq)?;
        if let Node::Leaf { members } = &mut self.nodes[leaf] {
            members.push(w.clone());
        }
        self.prefixes.push(w);
        Ok(true)
    }

    /// Replaces `leaf` by a node labelled `v`. Every word recorded in the
    /// leaf moves to the left child if `L(w·v) = 1`, else to the right one.
    /// Returns the number of membership queries spent.
    pub fn split<O>(&mut self, leaf: usize, v: &Word, mq: &mut QueryCache<O>) -> Result<u64>
    where
        O: MembershipOracle<Output = bool>,
    {
        let members = match self.nodes.get(leaf) {
            Some(Node::Leaf { members }) => members.clone(),
            _ => return Err(Error::Precondition(alloc::format!("node {leaf} is not a leaf"))),
        };
        let before = mq.log().membership;
        let tracked: Vec<Word> = self.leaf_of.iter().filter(|&(_, &l)| l == leaf).map(|(w, _)| w.clone()).collect();
        let mut answers = BTreeMap::new();
        for w in &tracked {
            answers.insert(w.clone(), self.member(&w.concat(v), mq)?);
        }
        if members.len() >= 2 && answers.values().all(|&b| b == answers[&members[0]]) {
            return Err(Error::Precondition(alloc::format!(
                "`{}` does not split the leaf {}",
                self.alphabet.render(v),
                self.render_members(&members)
            )));
        }
        let (left, right) = (self.nodes.len(), self.nodes.len() + 1);
        let (yes, no): (Vec<Word>, Vec<Word>) = members.into_iter().partition(|s| answers[s]);
        self.nodes.push(Node::Leaf { members: yes });
        self.nodes.push(Node::Leaf { members: no });
        self.parents.push(Some(leaf));
        self.parents.push(Some(leaf));
        self.nodes[leaf] = Node::Inner { label: v.clone(), left, right };
        for (w, b) in answers {
            self.leaf_of.insert(w, if b { left } else { right });
        }
        Ok(mq.log().membership - before)
    }

    fn lowest_common_ancestor(&self, x: usize, y: usize) -> usize {
        let mut ancestors = Vec::new();
        let mut n = Some(x);
        while let Some(i) = n {
            ancestors.push(i);
            n = self.parents[i];
        }
        let mut n = y;
        while !ancestors.contains(&n) {
            n = self.parents[n].expect("root is a common ancestor");
        }
        n
    }

    fn path_has_label(&self, leaf: usize, v: &Word) -> bool {
        let mut n = self.parents[leaf];
        while let Some(i) = n {
            if self.label(i) == Some(v) {
                return true;
            }
            n = self.parents[i];
        }
        false
    }

    /// First defect, checking init-closedness, δ-closedness,
    /// out-consistency and δ-consistency in that order. Words are visited in
    /// `S` order, then alphabet order; each prefix is compared with the
    /// first member of its leaf.
    pub fn defects<O>(&mut self, mq: &mut QueryCache<O>) -> Result<Option<TreeDefect>>
    where
        O: MembershipOracle<Output = bool>,
    {
        let eps = Word::empty();
        let leaf = self.sift(&eps, mq)?;
        if self.members(leaf).is_empty() {
            return Ok(Some(TreeDefect::Closedness(eps)));
        }
        let prefixes = self.prefixes.clone();
        let mut rows = prefixes.clone();
        for s in &prefixes {
            for a in self.alphabet.symbols() {
                let t = s.append(a);
                let leaf = self.sift(&t, mq)?;
                if self.members(leaf).is_empty() {
                    return Ok(Some(TreeDefect::Closedness(t)));
                }
                rows.push(t);
            }
        }

        for t in &rows {
            let leaf = self.leaf_of[t];
            if self.path_has_label(leaf, &eps) {
                continue;
            }
            let rep = self.members(leaf)[0].clone();
            if &rep != t && self.member(&rep, mq)? != self.member(t, mq)? {
                return Ok(Some(TreeDefect::Consistency { first: rep, second: t.clone(), suffix: eps }));
            }
        }

        for s in &prefixes {
            let rep = &self.members(self.leaf_of[s])[0];
            if rep == s {
                continue;
            }
            for a in self.alphabet.symbols() {
                let l1 = self.leaf_of[&rep.append(a)];
                let l2 = self.leaf_of[&s.append(a)];
                if l1 != l2 {
                    let lca = self.lowest_common_ancestor(l1, l2);
                    let u = self.label(lca).expect("distinct leaves meet at an inner node");
                    return Ok(Some(TreeDefect::Consistency {
                        first: rep.clone(),
                        second: s.clone(),
                        suffix: u.prepend(a),
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Resolves defects until there are none: closedness defects add the
    /// word to `S`, consistency defects split the leaf of the pair. Returns
    /// the cost of every split.
    pub fn fix<O>(&mut self, mq: &mut QueryCache<O>) -> Result<Vec<SplitCost>>
    where
        O: MembershipOracle<Output = bool>,
    {
        let mut costs = Vec::new();
        while let Some(defect) = self.defects(mq)? {
            let phase = mq.set_phase(Phase::Fix);
            let step = match defect {
                TreeDefect::Closedness(t) => self.add_prefix(t, mq).map(|_| ()),
                TreeDefect::Consistency { first, suffix, .. } => {
                    let prefixes = self.prefixes.len();
                    let rows = self.row_count();
                    let leaf = self.leaf_of[&first];
                    self.split(leaf, &suffix, mq).map(|queries| costs.push(SplitCost { prefixes, rows, queries }))
                }
            };
            mq.set_phase(phase);
            step?;
        }
        Ok(costs)
    }

    /// One state per nonempty leaf, numbered by first member in `S` order.
    pub fn hypothesis<O>(&mut self, mq: &mut QueryCache<O>) -> Result<Hypothesis>
    where
        O: MembershipOracle<Output = bool>,
    {
        if let Some(d) = self.defects(mq)? {
            let msg = match d {
                TreeDefect::Closedness(t) => {
                    alloc::format!("tree is not closed: `{}` sifts into an empty leaf", self.alphabet.render(&t))
                }
                TreeDefect::Consistency { first, second, suffix } => alloc::format!(
                    "tree is not consistent: `{}` and `{}` differ on `{}`",
                    self.alphabet.render(&first),
                    self.alphabet.render(&second),
                    self.alphabet.render(&suffix)
                ),
            };
            return Err(Error::Precondition(msg));
        }
        let mut state_of: BTreeMap<usize, usize> = BTreeMap::new();
        let mut representatives = Vec::new();
        for s in &self.prefixes {
            let leaf = self.leaf_of[s];
            if let alloc::collections::btree_map::Entry::Vacant(e) = state_of.entry(leaf) {
                e.insert(representatives.len());
                representatives.push(s.clone());
            }
        }
        let mut accepting = Vec::with_capacity(representatives.len());
        let mut delta = Vec::with_capacity(representatives.len() * self.alphabet.len());
        for s in &representatives {
            accepting.push(self.member(s, mq)?);
            for a in self.alphabet.symbols() {
                delta.push(state_of[&self.leaf_of[&s.append(a)]]);
            }
        }
        let initial = state_of[&self.leaf_of[&Word::empty()]];
        let dfa = Dfa::new(self.alphabet.clone(), initial, accepting, delta)?;
        Ok(Hypothesis { dfa, representatives, rows: None })
    }

    fn render_members(&self, members: &[Word]) -> String {
        let mut out = String::from("[");
        for (i, s) in members.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&self.alphabet.render(s));
        }
        out.push(']');
        out
    }

    /// Indented dump: `? v` for inner nodes (left child first), `[s1, s2]`
    /// for leaves.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(0usize, 0usize)];
        while let Some((node, depth)) = stack.pop() {
            for _ in 0..depth {
                out.push_str("  ");
            }
            match &self.nodes[node] {
                Node::Inner { label, left, right } => {
                    out.push_str("? ");
                    out.push_str(&self.alphabet.render(label));
                    stack.push((*right, depth + 1));
                    stack.push((*left, depth + 1));
                }
                Node::Leaf { members } => out.push_str(&self.render_members(members)),
            }
            out.push('\n');
        }
        out
    }
}
