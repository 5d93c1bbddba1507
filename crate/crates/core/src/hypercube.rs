//! Exact combinatorics of `{0,1}^n`: points, Hamming balls, and dense vertex
//! sets with ρ-expansion.
//!
//! Variable `i` of a point is stored in bit `i` of a `u64`. In text the point
//! is written as a bitstring whose first character is variable 0.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{check_dim, Error, Result};

/// Largest dimension for which dense [`PointSet`]s may be built.
pub const EXACT_CAP: usize = 24;

/// Largest dimension a [`Point`] can represent.
pub const MAX_DIM: usize = 64;

#[inline]
pub(crate) fn dim_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A vertex of the `n`-dimensional hypercube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    n: usize,
    bits: u64,
}

impl Point {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::invalid(format!(
                "point dimension must be in 1..={MAX_DIM}, got {n}"
            )));
        }
        if bits & !dim_mask(n) != 0 {
            return Err(Error::invalid(format!(
                "bits {bits:#x} set outside dimension {n}"
            )));
        }
        Ok(Point { n, bits })
    }

    /// Builds a point without validation; `bits` is masked to `n`.
    #[inline]
    pub(crate) fn from_raw(n: usize, bits: u64) -> Self {
        Point {
            n,
            bits: bits & dim_mask(n),
        }
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Point::new(n, 0)
    }

    pub fn ones(n: usize) -> Result<Self> {
        Point::new(n, dim_mask(n))
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        let raw = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        Point::new(bits.len(), raw)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Raw bit representation; bit `i` is variable `i`.
    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn get(&self, var: usize) -> bool {
        debug_assert!(var < self.n);
        (self.bits >> var) & 1 == 1
    }

    #[inline]
    pub fn flipped(&self, var: usize) -> Point {
        debug_assert!(var < self.n);
        Point {
            n: self.n,
            bits: self.bits ^ (1u64 << var),
        }
    }

    pub fn with(&self, var: usize, value: bool) -> Point {
        let bits = if value {
            self.bits | (1u64 << var)
        } else {
            self.bits & !(1u64 << var)
        };
        Point { n: self.n, bits }
    }

    pub fn complement(&self) -> Point {
        Point {
            n: self.n,
            bits: !self.bits & dim_mask(self.n),
        }
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::invalid(format!(
                        "invalid character {other:?} in bitstring {s:?}"
                    )))
                }
            }
        }
        Point::from_bools(&bits)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn hamming_distance(x: &Point, y: &Point) -> Result<usize> {
    check_dim(x.n, y.n)?;
    Ok((x.bits ^ y.bits).count_ones() as usize)
}

/// `Σ_{i=0}^{ρ} C(n, i)`, with `ρ` clamped to `n`.
pub fn ball_size(n: usize, radius: usize) -> u128 {
    let radius = radius.min(n);
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for i in 0..=radius {
        total = total.saturating_add(binom);
        // C(n, i+1) = C(n, i) * (n - i) / (i + 1); exact for n <= 127.
        binom = binom.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    total
}

/// Enumerates `B_ρ(x)` by increasing distance, then by lexicographic order of
/// the flipped positions.
pub fn ball(center: Point, radius: usize) -> Ball {
    Ball {
        center,
        radius: radius.min(center.n),
        positions: Vec::new(),
        started: false,
        done: false,
    }
}

#[derive(Clone, Debug)]
pub struct Ball {
    center: Point,
    radius: usize,
    positions: Vec<usize>,
    started: bool,
    done: bool,
}

impl Ball {
    fn advance(&mut self) -> bool {
        let n = self.center.n;
        let d = self.positions.len();
        // next combination of d positions out of n
        let mut i = d;
        while i > 0 {
            i -= 1;
            if self.positions[i] < n - d + i {
                self.positions[i] += 1;
                for j in i + 1..d {
                    self.positions[j] = self.positions[j - 1] + 1;
                }
                return true;
            }
        }
        // move to the next distance
        if d < self.radius {
            self.positions = (0..=d).collect();
            return true;
        }
        false
    }
}

impl Iterator for Ball {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.center);
        }
        if !self.advance() {
            self.done = true;
            return None;
        }
        let mask = self.positions.iter().fold(0u64, |m, &p| m | (1u64 << p));
        Some(Point::from_raw(self.center.n, self.center.bits ^ mask))
    }
}

const FLIP_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// Dense indicator set over all `2^n` vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct PointSet {
    n: usize,
    words: Vec<u64>,
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointSet")
            .field("n", &self.n)
            .field("len", &self.len())
            .finish()
    }
}

impl PointSet {
    pub fn check_cap(n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if n > EXACT_CAP {
            return Err(Error::CapExceeded { n, cap: EXACT_CAP });
        }
        Ok(())
    }

    fn word_count(n: usize) -> usize {
        if n <= 6 {
            1
        } else {
            1 << (n - 6)
        }
    }

    /// Mask of valid bits in the last word.
    fn tail_mask(&self) -> u64 {
        if self.n >= 6 {
            u64::MAX
        } else {
            dim_mask(1 << self.n)
        }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::check_cap(n)?;
        Ok(PointSet {
            n,
            words: vec![0; Self::word_count(n)],
        })
    }

    pub fn full(n: usize) -> Result<Self> {
        let mut s = Self::empty(n)?;
        s.words.iter_mut().for_each(|w| *w = u64::MAX);
        let tail = s.tail_mask();
        if let Some(last) = s.words.last_mut() {
            *last &= tail;
        }
        Ok(s)
    }

    pub fn from_predicate(n: usize, mut pred: impl FnMut(Point) -> bool) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for raw in 0..(1u64 << n) {
            if pred(Point::from_raw(n, raw)) {
                s.words[(raw >> 6) as usize] |= 1u64 << (raw & 63);
            }
        }
        Ok(s)
    }

    pub fn from_points(n: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for p in points {
            s.insert(p)?;
        }
        Ok(s)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Membership by raw index (bit `i` of `raw` is variable `i`).
    #[inline]
    pub fn contains_raw(&self, raw: u64) -> bool {
        (self.words[(raw >> 6) as usize] >> (raw & 63)) & 1 == 1
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.n == self.n && self.contains_raw(p.bits)
    }

    pub fn insert(&mut self, p: Point) -> Result<()> {
        check_dim(self.n, p.n)?;
        self.words[(p.bits >> 6) as usize] |= 1u64 << (p.bits & 63);
        Ok(())
    }

    pub fn len(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Raw indices of members in increasing order.
    pub fn iter_raw(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let base = (wi as u64) << 6;
            BitIter(w).map(move |b| base + b as u64)
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        let n = self.n;
        self.iter_raw().map(move |raw| Point::from_raw(n, raw))
    }

    fn zip_with(&self, other: &PointSet, f: impl Fn(u64, u64) -> u64) -> Result<PointSet> {
        check_dim(self.n, other.n)?;
        Ok(PointSet {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> PointSet {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.tail_mask();
        if let Some(last) = words.last_mut() {
            *last &= tail;
        }
        PointSet { n: self.n, words }
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.n == other.n
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.n == other.n
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(&a, &b)| a & b == 0)
    }

    /// One neighbor-union round: `S ∪ {x ⊕ e_i : x ∈ S, i < n}`.
    pub fn expand_once(&self) -> PointSet {
        let mut out = self.words.clone();
        for i in 0..self.n.min(6) {
            let s = 1u32 << i;
            let m = FLIP_MASKS[i];
            for (o, &w) in out.iter_mut().zip(&self.words) {
                *o |= ((w >> s) & m) | ((w & m) << s);
            }
        }
        for i in 6..self.n {
            let stride = 1usize << (i - 6);
            for (j, o) in out.iter_mut().enumerate() {
                *o |= self.words[j ^ stride];
            }
        }
        PointSet {
            n: self.n,
            words: out,
        }
    }

    /// `{x : ∃ z ∈ S, d_H(x, z) ≤ ρ}` via `ρ` neighbor-union rounds.
    pub fn expand(&self, radius: usize) -> PointSet {
        let mut cur = self.clone();
        for _ in 0..radius.min(self.n) {
            let next = cur.expand_once();
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}
