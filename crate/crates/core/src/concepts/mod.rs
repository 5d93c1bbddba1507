//! Concept classes over `{0,1}^n`: terms, clauses, k-CNF formulas, monotone
//! and general conjunctions, and k-decision lists.
//!
//! Every concept evaluates on raw point bits through the [`Concept`] trait, so
//! exact oracles can sweep all `2^n` vertices without allocation.

mod structure;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::hypercube::{dim_mask, Point, PointSet, MAX_DIM};

pub use structure::{
    disagreement_cnfs, maximal_disjoint_clauses, restrict, DisagreementCnf, DisjointClauses,
};
pub use text::{parse_cnf, parse_concept, parse_decision_list};

/// A Boolean function on `{0,1}^n`.
pub trait Concept: Send + Sync {
    fn dim(&self) -> usize;

    /// Evaluates on raw bits (bit `i` is variable `i`). No dimension check.
    fn eval_raw(&self, bits: u64) -> bool;

    fn evaluate(&self, x: &Point) -> Result<bool> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.eval_raw(x.bits()))
    }
}

impl<C: Concept + ?Sized> Concept for &C {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval_raw(&self, bits: u64) -> bool {
        (**self).eval_raw(bits)
    }
}

impl<C: Concept + ?Sized> Concept for Box<C> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval_raw(&self, bits: u64) -> bool {
        (**self).eval_raw(bits)
    }
}

/// Exact indicator of `{x : c(x) = 1}`.
pub fn satisfying_set<C: Concept + ?Sized>(c: &C) -> Result<PointSet> {
    PointSet::from_predicate(c.dim(), |x| c.eval_raw(x.bits()))
}

/// Exact indicator of `{x : a(x) ≠ b(x)}`.
pub fn disagreement_set<A, B>(a: &A, b: &B) -> Result<PointSet>
where
    A: Concept + ?Sized,
    B: Concept + ?Sized,
{
    check_dim(a.dim(), b.dim())?;
    PointSet::from_predicate(a.dim(), |x| a.eval_raw(x.bits()) != b.eval_raw(x.bits()))
}

fn check_concept_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::invalid(format!(
            "concept dimension must be in 1..={MAX_DIM}, got {n}"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn negate(self) -> Self {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }

    #[inline]
    pub fn satisfied_by(&self, bits: u64) -> bool {
        ((bits >> self.var) & 1 == 1) != self.negated
    }

    /// DIMACS-style signed, 1-based index.
    pub fn to_signed(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn from_signed(s: i64) -> Result<Self> {
        if s == 0 {
            return Err(Error::invalid("literal index 0 is reserved"));
        }
        let var = (s.unsigned_abs() - 1) as usize;
        Ok(Literal {
            var,
            negated: s < 0,
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_signed())
    }
}

/// Positive and negative literal masks of a literal set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
struct Masks {
    pos: u64,
    neg: u64,
}

fn build_literals(mut literals: Vec<Literal>) -> Result<(Vec<Literal>, Masks)> {
    literals.sort();
    let mut masks = Masks::default();
    for w in literals.windows(2) {
        if w[0].var == w[1].var {
            return Err(Error::invalid(format!(
                "variable {} appears twice in one term or clause",
                w[0].var + 1
            )));
        }
    }
    for l in &literals {
        if l.var >= MAX_DIM {
            return Err(Error::invalid(format!(
                "variable index {} too large",
                l.var + 1
            )));
        }
        if l.negated {
            masks.neg |= 1u64 << l.var;
        } else {
            masks.pos |= 1u64 << l.var;
        }
    }
    Ok((literals, masks))
}

/// Conjunction of literals; the empty term is constant true.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    literals: Vec<Literal>,
    masks: Masks,
}

impl Term {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let (literals, masks) = build_literals(literals.into_iter().collect())?;
        Ok(Term { literals, masks })
    }

    pub fn truth() -> Self {
        Term {
            literals: Vec::new(),
            masks: Masks::default(),
        }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn width(&self) -> usize {
        self.literals.len()
    }

    pub fn is_truth(&self) -> bool {
        self.literals.is_empty()
    }

    #[inline]
    pub fn satisfied_by(&self, bits: u64) -> bool {
        bits & self.masks.pos == self.masks.pos && bits & self.masks.neg == 0
    }

    /// `¬K` as a clause of the same width.
    pub fn negation(&self) -> Clause {
        Clause {
            literals: self.literals.iter().map(|l| l.negate()).collect(),
            masks: Masks {
                pos: self.masks.neg,
                neg: self.masks.pos,
            },
        }
    }

    fn max_var(&self) -> Option<usize> {
        self.literals.iter().map(|l| l.var).max()
    }
}

/// Disjunction of literals; the empty clause is constant false.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
    masks: Masks,
}

impl Clause {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let (literals, masks) = build_literals(literals.into_iter().collect())?;
        Ok(Clause { literals, masks })
    }

    pub fn falsum() -> Self {
        Clause {
            literals: Vec::new(),
            masks: Masks::default(),
        }
    }

    pub fn unit(lit: Literal) -> Self {
        Clause::new([lit]).expect("single literal clause")
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn width(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn var_mask(&self) -> u64 {
        self.masks.pos | self.masks.neg
    }

    #[inline]
    pub fn satisfied_by(&self, bits: u64) -> bool {
        bits & self.masks.pos != 0 || !bits & self.masks.neg != 0
    }

    /// `¬C` as a term.
    pub fn negation(&self) -> Term {
        Term {
            literals: self.literals.iter().map(|l| l.negate()).collect(),
            masks: Masks {
                pos: self.masks.neg,
                neg: self.masks.pos,
            },
        }
    }

    fn max_var(&self) -> Option<usize> {
        self.literals.iter().map(|l| l.var).max()
    }
}

fn check_vars(n: usize, max_var: Option<usize>) -> Result<()> {
    match max_var {
        Some(v) if v >= n => Err(Error::invalid(format!(
            "variable {} out of range for dimension {n}",
            v + 1
        ))),
        _ => Ok(()),
    }
}

/// A CNF formula whose clauses have width at most `k`. No clauses means true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    n: usize,
    k: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    /// Width bound `k` is taken as the widest clause.
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        let k = clauses.iter().map(Clause::width).max().unwrap_or(0);
        Self::with_width(n, k, clauses)
    }

    pub fn with_width(n: usize, k: usize, clauses: Vec<Clause>) -> Result<Self> {
        check_concept_dim(n)?;
        for c in &clauses {
            check_vars(n, c.max_var())?;
            if c.width() > k {
                return Err(Error::invalid(format!(
                    "clause of width {} exceeds width bound {k}",
                    c.width()
                )));
            }
        }
        Ok(CnfFormula { n, k, clauses })
    }

    /// The constant-false formula: one empty clause.
    pub fn falsum(n: usize) -> Result<Self> {
        Self::new(n, vec![Clause::falsum()])
    }

    pub fn truth(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn width(&self) -> usize {
        self.k
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_falsum(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    /// True iff every clause is a unit clause (the formula is a conjunction).
    pub fn as_conjunction(&self) -> Option<Conjunction> {
        if !self.clauses.iter().all(|c| c.width() == 1) {
            return None;
        }
        let lits: Vec<Literal> = self.clauses.iter().map(|c| c.literals[0]).collect();
        let mut uniq = lits.clone();
        uniq.sort();
        uniq.dedup();
        Term::new(uniq)
            .ok()
            .map(|term| Conjunction { n: self.n, term })
    }
}

impl Concept for CnfFormula {
    fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn eval_raw(&self, bits: u64) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(bits))
    }
}

/// General conjunction of literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjunction {
    n: usize,
    term: Term,
}

impl Conjunction {
    pub fn new(n: usize, term: Term) -> Result<Self> {
        check_concept_dim(n)?;
        check_vars(n, term.max_var())?;
        Ok(Conjunction { n, term })
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn len(&self) -> usize {
        self.term.width()
    }

    pub fn is_empty(&self) -> bool {
        self.term.is_truth()
    }
}

impl Concept for Conjunction {
    fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn eval_raw(&self, bits: u64) -> bool {
        self.term.satisfied_by(bits)
    }
}

/// Conjunction of positive literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonotoneConjunction {
    n: usize,
    mask: u64,
}

impl MonotoneConjunction {
    pub fn new(n: usize, vars: impl IntoIterator<Item = usize>) -> Result<Self> {
        check_concept_dim(n)?;
        let mut mask = 0u64;
        for v in vars {
            if v >= n {
                return Err(Error::invalid(format!(
                    "variable {} out of range for dimension {n}",
                    v + 1
                )));
            }
            mask |= 1u64 << v;
        }
        Ok(MonotoneConjunction { n, mask })
    }

    /// Conjunction of all `n` variables.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(n, 0..n)
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        check_concept_dim(n)?;
        if mask & !dim_mask(n) != 0 {
            return Err(Error::invalid("mask has variables outside the dimension"));
        }
        Ok(MonotoneConjunction { n, mask })
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn vars(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| (self.mask >> i) & 1 == 1).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn to_conjunction(&self) -> Conjunction {
        let term = Term::new(self.vars().into_iter().map(Literal::pos)).expect("distinct vars");
        Conjunction { n: self.n, term }
    }
}

impl Concept for MonotoneConjunction {
    fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn eval_raw(&self, bits: u64) -> bool {
        bits & self.mask == self.mask
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DlItem {
    pub term: Term,
    pub output: bool,
}

/// `(K_1, v_1), …, (K_r, v_r)` with first-match semantics and a true default.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionList {
    n: usize,
    k: usize,
    items: Vec<DlItem>,
}

impl DecisionList {
    pub fn new(n: usize, k: usize, items: Vec<DlItem>) -> Result<Self> {
        check_concept_dim(n)?;
        let last = items
            .last()
            .ok_or_else(|| Error::invalid("decision list must be non-empty"))?;
        if !last.term.is_truth() {
            return Err(Error::invalid(
                "last decision-list item must have the constant-true term",
            ));
        }
        for it in &items {
            check_vars(n, it.term.max_var())?;
            if it.term.width() > k {
                return Err(Error::invalid(format!(
                    "term of width {} exceeds width bound {k}",
                    it.term.width()
                )));
            }
        }
        Ok(DecisionList { n, k, items })
    }

    pub fn constant(n: usize, k: usize, output: bool) -> Result<Self> {
        Self::new(
            n,
            k,
            vec![DlItem {
                term: Term::truth(),
                output,
            }],
        )
    }

    /// Encodes a k-CNF `C_1 ∧ … ∧ C_m` as `(¬C_1, 0), …, (¬C_m, 0), (true, 1)`.
    pub fn from_cnf(phi: &CnfFormula) -> Result<Self> {
        let mut items: Vec<DlItem> = phi
            .clauses()
            .iter()
            .map(|c| DlItem {
                term: c.negation(),
                output: false,
            })
            .collect();
        items.push(DlItem {
            term: Term::truth(),
            output: true,
        });
        Self::new(phi.dim(), phi.width(), items)
    }

    pub fn width(&self) -> usize {
        self.k
    }

    pub fn items(&self) -> &[DlItem] {
        &self.items
    }

    /// Index of the first item whose term is satisfied.
    #[inline]
    pub fn activation(&self, bits: u64) -> usize {
        self.items
            .iter()
            .position(|it| it.term.satisfied_by(bits))
            .expect("last term is constant true")
    }

    /// Number of items `r`.
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn literal_count(&self) -> usize {
        self.items.iter().map(|it| it.term.width()).sum()
    }
}

impl Concept for DecisionList {
    fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn eval_raw(&self, bits: u64) -> bool {
        for it in &self.items {
            if it.term.satisfied_by(bits) {
                return it.output;
            }
        }
        unreachable!("last term is constant true")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constant {
    pub n: usize,
    pub value: bool,
}

impl Concept for Constant {
    fn dim(&self) -> usize {
        self.n
    }
    fn eval_raw(&self, _bits: u64) -> bool {
        self.value
    }
}

/// Pointwise negation of a concept.
#[derive(Clone, Debug)]
pub struct Not<C>(pub C);

impl<C: Concept> Concept for Not<C> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval_raw(&self, bits: u64) -> bool {
        !self.0.eval_raw(bits)
    }
}

/// Any concept that has a text representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyConcept {
    Cnf(CnfFormula),
    DecisionList(DecisionList),
    Conjunction(Conjunction),
    Monotone(MonotoneConjunction),
    Constant { n: usize, value: bool },
}

impl AnyConcept {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyConcept::Cnf(_) => "cnf",
            AnyConcept::DecisionList(_) => "dl",
            AnyConcept::Conjunction(_) => "conj",
            AnyConcept::Monotone(_) => "monconj",
            AnyConcept::Constant { .. } => "const",
        }
    }

    pub fn as_cnf(&self) -> Option<&CnfFormula> {
        match self {
            AnyConcept::Cnf(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_decision_list(&self) -> Option<&DecisionList> {
        match self {
            AnyConcept::DecisionList(d) => Some(d),
            _ => None,
        }
    }

    /// Converts to a k-CNF when the concept has a direct CNF form.
    pub fn to_cnf(&self) -> Option<CnfFormula> {
        match self {
            AnyConcept::Cnf(f) => Some(f.clone()),
            AnyConcept::Conjunction(c) => CnfFormula::new(
                c.n,
                c.term.literals().iter().map(|&l| Clause::unit(l)).collect(),
            )
            .ok(),
            AnyConcept::Monotone(m) => CnfFormula::new(
                m.n,
                m.vars()
                    .into_iter()
                    .map(|v| Clause::unit(Literal::pos(v)))
                    .collect(),
            )
            .ok(),
            AnyConcept::Constant { n, value } => {
                if *value {
                    CnfFormula::truth(*n).ok()
                } else {
                    CnfFormula::falsum(*n).ok()
                }
            }
            AnyConcept::DecisionList(_) => None,
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            AnyConcept::Cnf(f) => text::cnf_to_text(f),
            AnyConcept::DecisionList(d) => text::dl_to_text(d),
            AnyConcept::Conjunction(c) => text::conj_to_text(c),
            AnyConcept::Monotone(m) => text::monconj_to_text(m),
            AnyConcept::Constant { n, value } => format!("const {n} {}\n", *value as u8),
        }
    }
}

impl Concept for AnyConcept {
    fn dim(&self) -> usize {
        match self {
            AnyConcept::Cnf(f) => f.dim(),
            AnyConcept::DecisionList(d) => d.dim(),
            AnyConcept::Conjunction(c) => c.dim(),
            AnyConcept::Monotone(m) => m.dim(),
            AnyConcept::Constant { n, .. } => *n,
        }
    }

    fn eval_raw(&self, bits: u64) -> bool {
        match self {
            AnyConcept::Cnf(f) => f.eval_raw(bits),
            AnyConcept::DecisionList(d) => d.eval_raw(bits),
            AnyConcept::Conjunction(c) => c.eval_raw(bits),
            AnyConcept::Monotone(m) => m.eval_raw(bits),
            AnyConcept::Constant { value, .. } => *value,
        }
    }
}

/// Partial assignment `a : I → {0,1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialAssignment {
    bindings: BTreeMap<usize, bool>,
}

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `vars[i]` to bit `i` of `pattern`.
    pub fn from_pattern(vars: &[usize], pattern: u64) -> Self {
        PartialAssignment {
            bindings: vars
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, (pattern >> i) & 1 == 1))
                .collect(),
        }
    }

    pub fn bind(&mut self, var: usize, value: bool) -> Result<()> {
        if self.bindings.insert(var, value).is_some() {
            return Err(Error::invalid(format!("variable {} bound twice", var + 1)));
        }
        Ok(())
    }

    pub fn get(&self, var: usize) -> Option<bool> {
        self.bindings.get(&var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.bindings.iter().map(|(&v, &b)| (v, b))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}
