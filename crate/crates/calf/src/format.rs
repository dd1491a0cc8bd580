//! Text formats for DFAs, WFAs and word lists.
//!
//! All formats are line oriented; `#` starts a comment and blank lines are
//! ignored. Errors carry the 1-based line number they were found on.
//! In WFA matrices a `/` surrounded by spaces separates rows.

use std::collections::HashMap;
use std::fmt;

use calf_core::weighted::{parse_rational, Rational, Wfa};
use calf_core::{Alphabet, Dfa, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

/// Non-blank lines with comments removed, paired with their line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn last_line(text: &str) -> usize {
    text.lines().count().max(1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Machine {
    Dfa(Dfa),
    Wfa(Wfa),
}

impl Machine {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Machine::Dfa(d) => d.alphabet(),
            Machine::Wfa(w) => w.alphabet(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Machine::Dfa(_) => "dfa",
            Machine::Wfa(_) => "wfa",
        }
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Machine::Dfa(d) => f.write_str(&serialize_dfa(d)),
            Machine::Wfa(w) => f.write_str(&serialize_wfa(w)),
        }
    }
}

/// Reads either format, dispatching on the header line.
pub fn parse_machine(text: &str) -> Result<Machine, FormatError> {
    match content_lines(text).next() {
        Some((_, "dfa")) => parse_dfa(text).map(Machine::Dfa),
        Some((_, "wfa")) => parse_wfa(text).map(Machine::Wfa),
        Some((line, other)) => err(line, format!("expected `dfa` or `wfa`, found `{other}`")),
        None => err(1, "empty file"),
    }
}

fn parse_alphabet(line: usize, value: &str) -> Result<Alphabet, FormatError> {
    Alphabet::new(value.split_whitespace()).or_else(|e| err(line, e.to_string()))
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, kind: &str) -> Result<(), FormatError> {
    match lines.next() {
        Some((_, l)) if l == kind => Ok(()),
        Some((line, l)) => err(line, format!("expected `{kind}`, found `{l}`")),
        None => err(1, "empty file"),
    }
}

pub fn parse_dfa(text: &str) -> Result<Dfa, FormatError> {
    let mut lines = content_lines(text);
    header(&mut lines, "dfa")?;

    let mut alphabet: Option<Alphabet> = None;
    let mut states: Option<(Vec<String>, HashMap<String, usize>)> = None;
    let mut initial: Option<(usize, String)> = None;
    let mut accepting: Option<(usize, Vec<String>)> = None;
    let mut delta: Vec<Option<usize>> = Vec::new();

    for (line, l) in lines {
        if let Some((key, value)) = l.split_once(':') {
            let value = value.trim();
            match key.trim() {
                "alphabet" if alphabet.is_none() => alphabet = Some(parse_alphabet(line, value)?),
                "states" if states.is_none() => {
                    let names: Vec<String> = value.split_whitespace().map(String::from).collect();
                    if names.is_empty() {
                        return err(line, "a DFA needs at least one state");
                    }
                    let mut index = HashMap::new();
                    for (i, n) in names.iter().enumerate() {
                        if index.insert(n.clone(), i).is_some() {
                            return err(line, format!("duplicate state `{n}`"));
                        }
                    }
                    states = Some((names, index));
                }
                "initial" if initial.is_none() => initial = Some((line, value.to_string())),
                "accepting" if accepting.is_none() => {
                    accepting = Some((line, value.split_whitespace().map(String::from).collect()))
                }
                k @ ("alphabet" | "states" | "initial" | "accepting") => {
                    return err(line, format!("duplicate `{k}` line"))
                }
                k => return err(line, format!("unknown key `{k}`")),
            }
            continue;
        }

        let (Some(alphabet), Some((names, index))) = (&alphabet, &states) else {
            return err(line, "transitions must come after the `alphabet` and `states` lines");
        };
        if delta.is_empty() {
            delta = vec![None; names.len() * alphabet.len()];
        }
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [from, symbol, "->", to] = parts[..] else {
            return err(line, format!("expected `STATE SYMBOL -> STATE`, found `{l}`"));
        };
        let state = |n: &str| index.get(n).copied().ok_or(n.to_string());
        let p = state(from).or_else(|n| err(line, format!("unknown state `{n}`")))?;
        let q = state(to).or_else(|n| err(line, format!("unknown state `{n}`")))?;
        let Some(a) = alphabet.symbol(symbol) else {
            return err(line, format!("unknown symbol `{symbol}`"));
        };
        let slot = &mut delta[p * alphabet.len() + a];
        if slot.is_some() {
            return err(line, format!("duplicate transition ({from}, {symbol})"));
        }
        *slot = Some(q);
    }

    let end = last_line(text);
    let Some(alphabet) = alphabet else { return err(end, "missing `alphabet` line") };
    let Some((names, index)) = states else { return err(end, "missing `states` line") };
    let Some((init_line, init)) = initial else { return err(end, "missing `initial` line") };
    let Some(&initial) = index.get(&init) else {
        return err(init_line, format!("unknown state `{init}`"));
    };
    let mut accept = vec![false; names.len()];
    if let Some((acc_line, acc)) = accepting {
        for n in acc {
            match index.get(&n) {
                Some(&q) => accept[q] = true,
                None => return err(acc_line, format!("unknown state `{n}`")),
            }
        }
    }
    if delta.is_empty() {
        delta = vec![None; names.len() * alphabet.len()];
    }
    let k = alphabet.len();
    let delta = delta
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            t.ok_or_else(|| FormatError {
                line: end,
                message: format!("missing transition ({}, {})", names[i / k], alphabet.token(i % k)),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Dfa::new(alphabet, initial, accept, delta).or_else(|e| err(end, e.to_string()))
}

/// States are written as `q0 … q{n-1}`.
pub fn serialize_dfa(d: &Dfa) -> String {
    let a = d.alphabet();
    let names: Vec<String> = (0..d.size()).map(|q| format!("q{q}")).collect();
    let mut out = String::from("dfa\n");
    out += &format!("alphabet: {}\n", a.tokens().join(" "));
    out += &format!("states: {}\n", names.join(" "));
    out += &format!("initial: {}\n", names[d.initial()]);
    let acc: Vec<&str> = (0..d.size()).filter(|&q| d.is_accepting(q)).map(|q| names[q].as_str()).collect();
    if acc.is_empty() {
        out += "accepting:\n";
    } else {
        out += &format!("accepting: {}\n", acc.join(" "));
    }
    for q in 0..d.size() {
        for s in a.symbols() {
            out += &format!("{} {} -> {}\n", names[q], a.token(s), names[d.next(q, s)]);
        }
    }
    out
}

fn parse_vector(line: usize, text: &str, dim: usize) -> Result<Vec<Rational>, FormatError> {
    let v = text
        .split_whitespace()
        .map(|t| parse_rational(t).ok_or(t))
        .collect::<Result<Vec<_>, _>>()
        .or_else(|t| err(line, format!("`{t}` is not a rational")))?;
    if v.len() != dim {
        return err(line, format!("expected {dim} entries, found {}", v.len()));
    }
    Ok(v)
}

pub fn parse_wfa(text: &str) -> Result<Wfa, FormatError> {
    let mut lines = content_lines(text);
    header(&mut lines, "wfa")?;

    let mut alphabet: Option<Alphabet> = None;
    let mut dim: Option<usize> = None;
    let mut init = None;
    let mut out = None;
    let mut matrices: HashMap<usize, Vec<Vec<Rational>>> = HashMap::new();

    for (line, l) in lines {
        let Some((key, value)) = l.split_once(':') else {
            return err(line, format!("expected `KEY: VALUE`, found `{l}`"));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "alphabet" if alphabet.is_none() => alphabet = Some(parse_alphabet(line, value)?),
            "dim" if dim.is_none() => {
                dim = Some(value.parse().or_else(|_| err(line, format!("`{value}` is not a dimension")))?)
            }
            "alphabet" | "dim" | "init" | "out" => {
                let Some(n) = dim else {
                    return err(line, "`dim` must come before vectors and matrices");
                };
                match key {
                    "init" if init.is_none() => init = Some(parse_vector(line, value, n)?),
                    "out" if out.is_none() => out = Some(parse_vector(line, value, n)?),
                    _ => return err(line, format!("duplicate `{key}` line")),
                }
            }
            symbol => {
                let (Some(alphabet), Some(n)) = (&alphabet, dim) else {
                    return err(line, "matrices must come after the `alphabet` and `dim` lines");
                };
                let Some(a) = alphabet.symbol(symbol) else {
                    return err(line, format!("unknown key or symbol `{symbol}`"));
                };
                if matrices.contains_key(&a) {
                    return err(line, format!("duplicate matrix for `{symbol}`"));
                }
                // Rows are separated by a standalone `/`; `p/q` is a fraction.
                let tokens: Vec<&str> = value.split_whitespace().collect();
                let rows: Vec<String> = if tokens.is_empty() {
                    Vec::new()
                } else {
                    tokens.split(|t| *t == "/").map(|r| r.join(" ")).collect()
                };
                if rows.len() != n {
                    return err(line, format!("expected {n} rows, found {}", rows.len()));
                }
                let m = rows.iter().map(|r| parse_vector(line, r, n)).collect::<Result<_, _>>()?;
                matrices.insert(a, m);
            }
        }
    }

    let end = last_line(text);
    let Some(alphabet) = alphabet else { return err(end, "missing `alphabet` line") };
    let Some(n) = dim else { return err(end, "missing `dim` line") };
    let Some(init) = init else { return err(end, "missing `init` line") };
    let Some(out) = out else { return err(end, "missing `out` line") };
    let trans = alphabet
        .symbols()
        .map(|a| {
            matrices.remove(&a).ok_or_else(|| FormatError {
                line: end,
                message: format!("missing matrix for `{}`", alphabet.token(a)),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    debug_assert!(trans.iter().all(|m| m.len() == n));
    Wfa::new(alphabet, init, trans, out).or_else(|e| err(end, e.to_string()))
}

fn join_rationals(v: &[Rational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn serialize_wfa(w: &Wfa) -> String {
    fn line(out: &mut String, key: &str, body: &str) {
        out.push_str(format!("{key}: {body}").trim_end());
        out.push('\n');
    }
    let a = w.alphabet();
    let mut out = String::from("wfa\n");
    line(&mut out, "alphabet", &a.tokens().join(" "));
    line(&mut out, "dim", &w.dim().to_string());
    line(&mut out, "init", &join_rationals(w.init()));
    line(&mut out, "out", &join_rationals(w.out()));
    for s in a.symbols() {
        let rows: Vec<String> = w.matrix(s).iter().map(|r| join_rationals(r)).collect();
        line(&mut out, a.token(s), &rows.join(" / "));
    }
    out
}

/// One word per line; `eps` is the empty word.
pub fn parse_words(text: &str, alphabet: &Alphabet) -> Result<Vec<Word>, FormatError> {
    content_lines(text).map(|(line, l)| alphabet.parse_word(l).or_else(|e| err(line, e.to_string()))).collect()
}

pub fn serialize_words(words: &[Word], alphabet: &Alphabet) -> String {
    let mut out = String::new();
    for w in words {
        out += &alphabet.render(w);
        out.push('\n');
    }
    out
}
