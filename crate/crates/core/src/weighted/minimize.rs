//! WFA minimization: forward reduction to the reachable subspace, then
//! backward reduction to the observable quotient.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use num_traits::Zero;

use super::linalg::{dot, solve_coords, Rational, SpanBasis};
use super::wfa::Wfa;
use crate::word::Word;

/// Words whose vectors span the forward space `{init · M_w}`, found
/// breadth-first (shortest first, symbols in alphabet order), with those
/// vectors.
pub fn forward_basis(w: &Wfa) -> (Vec<Word>, Vec<Vec<Rational>>) {
    let mut span = SpanBasis::new();
    let (mut words, mut vectors) = (Vec::new(), Vec::new());
    let mut queue = VecDeque::from([(Word::empty(), w.init().to_vec())]);
    while let Some((u, x)) = queue.pop_front() {
        if !span.insert(&x) {
            continue;
        }
        for a in w.alphabet().symbols() {
            queue.push_back((u.append(a), w.step_forward(&x, a)));
        }
        words.push(u);
        vectors.push(x);
    }
    (words, vectors)
}

/// Words whose vectors span the backward space `{M_w · out}`, found
/// breadth-first by prepending symbols.
pub fn backward_basis(w: &Wfa) -> (Vec<Word>, Vec<Vec<Rational>>) {
    let mut span = SpanBasis::new();
    let (mut words, mut vectors) = (Vec::new(), Vec::new());
    let mut queue = VecDeque::from([(Word::empty(), w.out().to_vec())]);
    while let Some((e, y)) = queue.pop_front() {
        if !span.insert(&y) {
            continue;
        }
        for a in w.alphabet().symbols() {
            queue.push_back((e.prepend(a), w.step_backward(a, &y)));
        }
        words.push(e);
        vectors.push(y);
    }
    (words, vectors)
}

fn coords(basis: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    solve_coords(basis, v).expect("vectors have the automaton's dimension").expect("the spanned space is invariant")
}

fn transpose(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Restriction to the span of the forward vectors, in the coordinates of
/// the forward basis.
fn forward_reduce(w: &Wfa) -> Wfa {
    let (_, f) = forward_basis(w);
    let k = f.len();
    let mut init = alloc::vec![Rational::zero(); k];
    if k > 0 {
        init = coords(&f, w.init());
    }
    let trans = w.alphabet().symbols().map(|a| f.iter().map(|x| coords(&f, &w.step_forward(x, a))).collect()).collect();
    let out = f.iter().map(|x| dot(x, w.out())).collect();
    Wfa::new(w.alphabet().clone(), init, trans, out).expect("dimensions agree")
}

/// Quotient by the annihilator of the backward vectors, in the coordinates
/// of the backward basis.
fn backward_reduce(w: &Wfa) -> Wfa {
    let (_, b) = backward_basis(w);
    let k = b.len();
    let out = if k > 0 { coords(&b, w.out()) } else { Vec::new() };
    // M_a · b_j = Σ_i c_i b_i gives column j of the new matrix.
    let trans = w
        .alphabet()
        .symbols()
        .map(|a| {
            let cols: Vec<Vec<Rational>> = b.iter().map(|y| coords(&b, &w.step_backward(a, y))).collect();
            transpose(&cols, k)
        })
        .collect();
    let init = b.iter().map(|y| dot(w.init(), y)).collect();
    Wfa::new(w.alphabet().clone(), init, trans, out).expect("dimensions agree")
}

/// Minimal WFA for the same language. The zero language gives dimension 0.
pub fn wfa_minimize(w: &Wfa) -> Wfa {
    backward_reduce(&forward_reduce(w))
}

/// Minimal WFA with access words spanning its state space and suffixes
/// separating it. Both lists start with `ε`, also for the zero language.
pub fn wfa_minimize_with_words(w: &Wfa) -> (Wfa, Vec<Word>, Vec<Word>) {
    let min = wfa_minimize(w);
    let mut access = forward_basis(&min).0;
    let mut separators = backward_basis(&min).0;
    if access.is_empty() {
        access.push(Word::empty());
    }
    if separators.is_empty() {
        separators.push(Word::empty());
    }
    (min, access, separators)
}
