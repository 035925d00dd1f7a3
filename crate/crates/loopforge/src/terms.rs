//! Loop terms, equations, and equation propagation.
//!
//! An equation E in n variables *propagates* in a loop X when for every
//! tuple x⃗ ∈ Xⁿ satisfying E, every tuple over the subloop generated by x⃗
//! also satisfies E.  Identities that hold everywhere propagate vacuously;
//! the interesting cases are equations holding only on part of the loop.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::loops::{Elem, ElemSet, FiniteLoop, IDENTITY};

/// A term over variables x0, x1, … in the signature (·, \, /, e).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Term {
    Var(usize),
    Identity,
    Mul(Box<Term>, Box<Term>),
    LDiv(Box<Term>, Box<Term>),
    RDiv(Box<Term>, Box<Term>),
}

impl Term {
    fn max_var(&self) -> Option<usize> {
        match self {
            Term::Var(i) => Some(*i),
            Term::Identity => None,
            Term::Mul(a, b) | Term::LDiv(a, b) | Term::RDiv(a, b) => {
                match (a.max_var(), b.max_var()) {
                    (None, m) | (m, None) => m,
                    (Some(x), Some(y)) => Some(x.max(y)),
                }
            }
        }
    }

    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>, top: bool) -> fmt::Result {
        const NAMES: [char; 6] = ['x', 'y', 'z', 'u', 'v', 'w'];
        match self {
            Term::Var(i) => match NAMES.get(*i) {
                Some(c) => write!(f, "{c}"),
                None => write!(f, "x{i}"),
            },
            Term::Identity => write!(f, "e"),
            Term::Mul(a, b) | Term::LDiv(a, b) | Term::RDiv(a, b) => {
                let op = match self {
                    Term::Mul(..) => '*',
                    Term::LDiv(..) => '\\',
                    _ => '/',
                };
                if !top {
                    write!(f, "(")?;
                }
                a.fmt_inner(f, false)?;
                write!(f, "{op}")?;
                b.fmt_inner(f, false)?;
                if !top {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_inner(f, true)
    }
}

/// Evaluates a term under an assignment of loop elements to variables.
///
/// Panics if the term mentions a variable outside the assignment.
pub fn eval_term(t: &Term, l: &FiniteLoop, assignment: &[Elem]) -> Elem {
    match t {
        Term::Var(i) => {
            assert!(*i < assignment.len(), "unbound variable x{i}");
            assignment[*i]
        }
        Term::Identity => IDENTITY,
        Term::Mul(a, b) => l.mul(eval_term(a, l, assignment), eval_term(b, l, assignment)),
        Term::LDiv(a, b) => l.ldiv(eval_term(a, l, assignment), eval_term(b, l, assignment)),
        Term::RDiv(a, b) => l.rdiv(eval_term(a, l, assignment), eval_term(b, l, assignment)),
    }
}

/// An equation lhs = rhs in `nvars` variables (numbered 0..nvars).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub nvars: usize,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        let nvars = lhs
            .max_var()
            .into_iter()
            .chain(rhs.max_var())
            .max()
            .map_or(0, |m| m + 1);
        Equation { lhs, rhs, nvars }
    }

    /// True when the tuple satisfies the equation in l.
    #[inline]
    pub fn satisfied_by(&self, l: &FiniteLoop, tuple: &[Elem]) -> bool {
        eval_term(&self.lhs, l, tuple) == eval_term(&self.rhs, l, tuple)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Error)]
pub enum TermError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("checking would need about {required} tuple evaluations, over the budget of {budget}")]
    Budget { required: u128, budget: u64 },
    #[error("equation has no variables; nothing to propagate")]
    NoVariables,
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Parses `lhs = rhs` with infix `*`, `\`, `/`.
///
/// Variables are the letters x y z u v w, numbered by first appearance;
/// `e` is the identity.  Every binary application must be parenthesized
/// except a single top-level one on each side, e.g. `(x*x)*x = e`.
pub fn parse_equation(text: &str) -> Result<Equation, TermError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut p = Parser {
        chars: &bytes,
        pos: 0,
        vars: Vec::new(),
    };
    let lhs = p.side()?;
    p.skip_ws();
    p.expect('=')?;
    let rhs = p.side()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input after equation"));
    }
    Ok(Equation {
        lhs,
        rhs,
        nvars: p.vars.len(),
    })
}

struct Parser<'a> {
    chars: &'a [char],
    pos: usize,
    vars: Vec<char>,
}

const VAR_LETTERS: [char; 6] = ['x', 'y', 'z', 'u', 'v', 'w'];

impl Parser<'_> {
    fn err(&self, message: &str) -> TermError {
        TermError::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), TermError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    /// One side of the equation: an atom, optionally followed by a single
    /// unparenthesized operator application.
    fn side(&mut self) -> Result<Term, TermError> {
        let left = self.atom()?;
        match self.peek() {
            Some(op @ ('*' | '\\' | '/')) => {
                self.pos += 1;
                let right = self.atom()?;
                Ok(combine(op, left, right))
            }
            _ => Ok(left),
        }
    }

    fn atom(&mut self) -> Result<Term, TermError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let left = self.atom()?;
                let t = match self.peek() {
                    Some(op @ ('*' | '\\' | '/')) => {
                        self.pos += 1;
                        let right = self.atom()?;
                        combine(op, left, right)
                    }
                    _ => left,
                };
                self.expect(')')?;
                Ok(t)
            }
            Some('e') => {
                self.pos += 1;
                Ok(Term::Identity)
            }
            Some(c) if VAR_LETTERS.contains(&c) => {
                self.pos += 1;
                let i = match self.vars.iter().position(|&v| v == c) {
                    Some(i) => i,
                    None => {
                        self.vars.push(c);
                        self.vars.len() - 1
                    }
                };
                Ok(Term::Var(i))
            }
            Some(c) => Err(self.err(&format!("unexpected character '{c}'"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn combine(op: char, a: Term, b: Term) -> Term {
    match op {
        '*' => Term::Mul(Box::new(a), Box::new(b)),
        '\\' => Term::LDiv(Box::new(a), Box::new(b)),
        _ => Term::RDiv(Box::new(a), Box::new(b)),
    }
}

// ---------------------------------------------------------------------------
// Built-in equations
// ---------------------------------------------------------------------------

/// Named identities available everywhere equations are accepted.
pub const BUILTIN_EQUATIONS: [(&str, &str); 6] = [
    ("assoc", "x*(y*z) = (x*y)*z"),
    ("comm", "x*y = y*x"),
    ("cube", "(x*x)*x = e"),
    ("steiner", "x*(x*y) = y"),
    ("moufang", "((x*y)*x)*z = x*(y*(x*z))"),
    ("rajah", "(x*z)*(((x*y)*z)*(y*z)) = ((x*z)*((x*y)*z))*(y*z)"),
];

/// Looks up a named identity; names are matched case-insensitively.
pub fn builtin_equation(name: &str) -> Option<Equation> {
    let lower = name.to_ascii_lowercase();
    BUILTIN_EQUATIONS
        .iter()
        .find(|(n, _)| *n == lower)
        .map(|(_, text)| parse_equation(text).expect("builtin equations parse"))
}

// ---------------------------------------------------------------------------
// Satisfaction and propagation
// ---------------------------------------------------------------------------

/// Default ceiling on |L|^n tuple evaluations for exhaustive scans.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

fn tuple_space(order: usize, nvars: usize) -> u128 {
    (order as u128).pow(nvars as u32)
}

fn check_budget(l: &FiniteLoop, nvars: usize, budget: u64) -> Result<u64, TermError> {
    let required = tuple_space(l.order(), nvars);
    if required > budget as u128 {
        return Err(TermError::Budget { required, budget });
    }
    Ok(required as u64)
}

fn decode_tuple(mut idx: u64, order: usize, out: &mut [Elem]) {
    for slot in out.iter_mut().rev() {
        *slot = (idx % order as u64) as Elem;
        idx /= order as u64;
    }
}

/// True when the equation holds for every tuple of the loop.
pub fn holds(eq: &Equation, l: &FiniteLoop) -> Result<bool, TermError> {
    holds_with_budget(eq, l, DEFAULT_BUDGET)
}

pub fn holds_with_budget(eq: &Equation, l: &FiniteLoop, budget: u64) -> Result<bool, TermError> {
    let total = check_budget(l, eq.nvars, budget)?;
    let mut tuple = vec![0; eq.nvars];
    for idx in 0..total {
        decode_tuple(idx, l.order(), &mut tuple);
        if !eq.satisfied_by(l, &tuple) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All satisfying tuples, in lexicographic order.
pub fn satisfying_tuples<'a>(
    eq: &'a Equation,
    l: &'a FiniteLoop,
) -> impl Iterator<Item = Vec<Elem>> + 'a {
    let total = tuple_space(l.order(), eq.nvars).min(u64::MAX as u128) as u64;
    (0..total).filter_map(move |idx| {
        let mut tuple = vec![0; eq.nvars];
        decode_tuple(idx, l.order(), &mut tuple);
        eq.satisfied_by(l, &tuple).then_some(tuple)
    })
}

/// Outcome of a propagation check.
///
/// On failure, `witness` is the first satisfying tuple (lexicographically)
/// whose generated subloop contains a violating tuple, `failure` is the first
/// violating tuple over that subloop, and `subloop_size` its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationReport {
    pub propagates: bool,
    pub witness: Option<Vec<Elem>>,
    pub failure: Option<Vec<Elem>>,
    pub subloop_size: Option<usize>,
    /// Satisfying tuples examined.
    pub witnesses_checked: u64,
    /// Distinct generated subloops that were exhaustively verified.
    pub subloops_verified: usize,
}

/// Checks whether the equation propagates in the loop.
pub fn propagates(eq: &Equation, l: &FiniteLoop) -> Result<PropagationReport, TermError> {
    propagates_with_budget(eq, l, DEFAULT_BUDGET)
}

/// Propagation check with an explicit evaluation budget.
///
/// Generated subloops are cached by canonical (sorted, deduplicated)
/// generator set, and a witness whose entries already lie inside a verified
/// subloop is skipped outright, since all of its tuples were covered.
pub fn propagates_with_budget(
    eq: &Equation,
    l: &FiniteLoop,
    budget: u64,
) -> Result<PropagationReport, TermError> {
    if eq.nvars == 0 {
        return Err(TermError::NoVariables);
    }
    let total = check_budget(l, eq.nvars, budget)?;
    let order = l.order();

    // Pass 1: if the equation holds globally it propagates vacuously.
    let mut all_satisfy = true;
    let mut tuple = vec![0; eq.nvars];
    for idx in 0..total {
        decode_tuple(idx, order, &mut tuple);
        if !eq.satisfied_by(l, &tuple) {
            all_satisfy = false;
            break;
        }
    }
    if all_satisfy {
        return Ok(PropagationReport {
            propagates: true,
            witness: None,
            failure: None,
            subloop_size: None,
            witnesses_checked: total,
            subloops_verified: 0,
        });
    }

    // Pass 2: verify the generated subloop of every satisfying tuple.
    let mut verified_keys: HashSet<Vec<Elem>> = HashSet::new();
    // Verified carriers, largest first, for the subset shortcut.
    let mut carriers: Vec<(ElemSet, usize)> = Vec::new();
    let mut witnesses_checked = 0u64;
    let mut subloops_verified = 0usize;

    let mut sub_tuple = vec![0; eq.nvars];
    for idx in 0..total {
        decode_tuple(idx, order, &mut tuple);
        if !eq.satisfied_by(l, &tuple) {
            continue;
        }
        witnesses_checked += 1;
        if carriers
            .iter()
            .any(|(set, _)| tuple.iter().all(|&x| set.contains(x)))
        {
            continue;
        }
        let mut key = tuple.clone();
        key.sort_unstable();
        key.dedup();
        if verified_keys.contains(&key) {
            continue;
        }
        let sub = l.generated_subloop(&key);
        let elems = sub.elements();
        let k = elems.len() as u64;
        let sub_total = (0..eq.nvars).try_fold(1u64, |acc, _| acc.checked_mul(k));
        // Subloop scans stay within the same budget the caller granted.
        match sub_total {
            Some(t) if t <= budget => {}
            _ => {
                return Err(TermError::Budget {
                    required: (k as u128).pow(eq.nvars as u32),
                    budget,
                })
            }
        }
        for sub_idx in 0..sub_total.unwrap() {
            let mut rem = sub_idx;
            for slot in sub_tuple.iter_mut().rev() {
                *slot = elems[(rem % k) as usize];
                rem /= k;
            }
            if !eq.satisfied_by(l, &sub_tuple) {
                return Ok(PropagationReport {
                    propagates: false,
                    witness: Some(tuple),
                    failure: Some(sub_tuple),
                    subloop_size: Some(elems.len()),
                    witnesses_checked,
                    subloops_verified,
                });
            }
        }
        subloops_verified += 1;
        verified_keys.insert(key);
        let mut set = ElemSet::new(order);
        for &e in elems {
            set.insert(e);
        }
        let pos = carriers
            .iter()
            .position(|(_, len)| *len < elems.len())
            .unwrap_or(carriers.len());
        carriers.insert(pos, (set, elems.len()));
    }

    Ok(PropagationReport {
        propagates: true,
        witness: None,
        failure: None,
        subloop_size: None,
        witnesses_checked,
        subloops_verified,
    })
}
