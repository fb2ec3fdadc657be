//! Depth-truncated Cantor unit spaces.
//!
//! Points are words of a fixed length over a finite alphabet, ordered
//! lexicographically. The metric is the prefix ultrametric
//! `d(x, y) = 2^-lcp(x, y)` for `x != y`, so every distance is dyadic and the
//! fattening `A^ε` / shrinking `A^-ε` of a set by a dyadic radius is a union of
//! cylinders that can be computed exactly.
//!
//! A unit space is either the full word space (`alphabet^depth` points) or a
//! lexicographically sorted subset of it, which is how Bratteli path spaces
//! and single-point bundles are modelled.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

const SYMBOLS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Default cap on the number of points of a unit space.
pub const DEFAULT_MAX_POINTS: usize = 1 << 16;

/// A point of a unit space, stored as its index in word order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(pub u32);

impl Word {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Distance between two points: zero or `2^-j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    Zero,
    Pow(u32),
}

impl Distance {
    pub fn value(self) -> Rational {
        match self {
            Distance::Zero => rational::zero(),
            Distance::Pow(j) => pow2_neg(j),
        }
    }

    /// `self < radius`
    pub fn lt(self, radius: DyadicRadius) -> bool {
        match (self, radius) {
            (_, DyadicRadius::Zero) => false,
            (Distance::Zero, _) => true,
            (_, DyadicRadius::OnePlus) => true,
            (Distance::Pow(d), DyadicRadius::Pow(r)) => d > r,
        }
    }

    /// `self > radius`
    pub fn gt(self, radius: DyadicRadius) -> bool {
        match (self, radius) {
            (Distance::Zero, _) => false,
            (_, DyadicRadius::OnePlus) => false,
            (Distance::Pow(_), DyadicRadius::Zero) => true,
            (Distance::Pow(d), DyadicRadius::Pow(r)) => d < r,
        }
    }
}

fn pow2_neg(j: u32) -> Rational {
    Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(2), j as usize))
}

/// A dyadic radius `2^-j`, zero, or a radius exceeding the diameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DyadicRadius {
    Zero,
    Pow(u32),
    OnePlus,
}

impl DyadicRadius {
    pub fn pow(exponent: u32) -> Self {
        DyadicRadius::Pow(exponent)
    }

    /// `2^-exponent` for any integer exponent; negative exponents exceed the
    /// diameter and collapse to `OnePlus`.
    pub fn from_exponent(exponent: i64) -> Self {
        if exponent < 0 {
            DyadicRadius::OnePlus
        } else {
            DyadicRadius::Pow(exponent as u32)
        }
    }

    /// The exponent `j` for `2^-j`; `OnePlus` reports -1, `Zero` reports `None`.
    pub fn exponent(self) -> Option<i64> {
        match self {
            DyadicRadius::Zero => None,
            DyadicRadius::Pow(j) => Some(j as i64),
            DyadicRadius::OnePlus => Some(-1),
        }
    }

    pub fn value(self) -> Rational {
        match self {
            DyadicRadius::Zero => rational::zero(),
            DyadicRadius::Pow(j) => pow2_neg(j),
            DyadicRadius::OnePlus => rational::int(2),
        }
    }

    pub fn is_positive(self) -> bool {
        self != DyadicRadius::Zero
    }

    /// Smallest dyadic radius `>= factor * self`.
    pub fn scaled_up(self, factor: u32) -> Self {
        assert!(factor >= 1);
        match self {
            DyadicRadius::Zero => DyadicRadius::Zero,
            DyadicRadius::OnePlus => DyadicRadius::OnePlus,
            DyadicRadius::Pow(j) => {
                let shift = (factor as f64).log2().ceil() as i64;
                DyadicRadius::from_exponent(j as i64 - shift)
            }
        }
    }

    fn key(self) -> (u8, i64) {
        match self {
            DyadicRadius::Zero => (0, 0),
            DyadicRadius::Pow(j) => (1, -(j as i64)),
            DyadicRadius::OnePlus => (2, 0),
        }
    }
}

impl PartialOrd for DyadicRadius {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicRadius {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for DyadicRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DyadicRadius::Zero => write!(f, "0"),
            DyadicRadius::Pow(j) => write!(f, "2^-{j}"),
            DyadicRadius::OnePlus => write!(f, ">1"),
        }
    }
}

/// A finite word space, possibly restricted to a subset of words.
#[derive(Debug, Clone)]
pub struct UnitSpace {
    alphabet: u32,
    depth: u32,
    full: bool,
    words: Vec<Box<[u8]>>,
    index: HashMap<Box<[u8]>, u32>,
    // blocks[l][x]: id of the length-l cylinder containing x
    blocks: Vec<Vec<u32>>,
}

impl PartialEq for UnitSpace {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.depth == other.depth && self.words == other.words
    }
}

impl Eq for UnitSpace {}

impl UnitSpace {
    /// The full space of `alphabet^depth` words.
    pub fn new(alphabet: u32, depth: u32) -> Result<Arc<Self>> {
        Self::with_max_points(alphabet, depth, DEFAULT_MAX_POINTS)
    }

    pub fn with_max_points(alphabet: u32, depth: u32, max_points: usize) -> Result<Arc<Self>> {
        check_shape(alphabet, depth)?;
        let count = (alphabet as u128).checked_pow(depth).unwrap_or(u128::MAX);
        if count > max_points as u128 {
            return Err(Error::Resource(format!(
                "{alphabet}^{depth} points exceeds the cap of {max_points}"
            )));
        }
        let mut words = Vec::with_capacity(count as usize);
        for i in 0..count as u64 {
            let mut symbols = vec![0u8; depth as usize];
            let mut rest = i;
            for slot in symbols.iter_mut().rev() {
                *slot = (rest % alphabet as u64) as u8;
                rest /= alphabet as u64;
            }
            words.push(symbols.into_boxed_slice());
        }
        Ok(Arc::new(Self::assemble(alphabet, depth, true, words)))
    }

    /// A subset of the word space given by explicit symbol sequences.
    pub fn from_words(alphabet: u32, depth: u32, mut words: Vec<Vec<u8>>) -> Result<Arc<Self>> {
        check_shape(alphabet, depth)?;
        if words.is_empty() {
            return Err(Error::Spec("a unit space needs at least one point".into()));
        }
        for w in &words {
            if w.len() != depth as usize || w.iter().any(|&s| s as u32 >= alphabet) {
                return Err(Error::Spec(format!("word {w:?} does not fit alphabet {alphabet}, depth {depth}")));
            }
        }
        words.sort();
        words.dedup();
        let full = (alphabet as u128).checked_pow(depth) == Some(words.len() as u128);
        let words = words.into_iter().map(Vec::into_boxed_slice).collect();
        Ok(Arc::new(Self::assemble(alphabet, depth, full, words)))
    }

    fn assemble(alphabet: u32, depth: u32, full: bool, words: Vec<Box<[u8]>>) -> Self {
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        let mut blocks = Vec::with_capacity(depth as usize + 1);
        for len in 0..=depth as usize {
            let mut ids = Vec::with_capacity(words.len());
            let mut current = 0u32;
            for (i, w) in words.iter().enumerate() {
                if i > 0 && words[i - 1][..len] != w[..len] {
                    current += 1;
                }
                ids.push(current);
            }
            blocks.push(ids);
        }
        UnitSpace {
            alphabet,
            depth,
            full,
            words,
            index,
            blocks,
        }
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// True when every word of the given alphabet and depth is a point.
    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.words.len() as u32).map(Word)
    }

    pub fn symbols(&self, w: Word) -> &[u8] {
        &self.words[w.index()]
    }

    pub fn word_of(&self, symbols: &[u8]) -> Option<Word> {
        self.index.get(symbols).map(|&i| Word(i))
    }

    pub fn format(&self, w: Word) -> String {
        self.symbols(w).iter().map(|&s| SYMBOLS[s as usize] as char).collect()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let symbols = self.parse_symbols(text)?;
        if symbols.len() != self.depth as usize {
            return Err(Error::Spec(format!("word {text:?} has length {}, expected {}", symbols.len(), self.depth)));
        }
        self.word_of(&symbols)
            .ok_or_else(|| Error::Spec(format!("word {text:?} is not a point of this unit space")))
    }

    fn parse_symbols(&self, text: &str) -> Result<Vec<u8>> {
        text.chars()
            .map(|c| {
                let c = c.to_ascii_lowercase();
                SYMBOLS
                    .iter()
                    .position(|&s| s as char == c)
                    .filter(|&p| (p as u32) < self.alphabet)
                    .map(|p| p as u8)
                    .ok_or_else(|| Error::Spec(format!("symbol {c:?} outside alphabet of size {}", self.alphabet)))
            })
            .collect()
    }

    fn check_point(&self, w: Word) -> Result<()> {
        if w.index() < self.words.len() {
            Ok(())
        } else {
            Err(Error::Usage(format!("point {} does not belong to this unit space", w.0)))
        }
    }

    /// Length of the longest common prefix.
    pub fn lcp(&self, x: Word, y: Word) -> u32 {
        let (a, b) = (self.symbols(x), self.symbols(y));
        a.iter().zip(b.iter()).take_while(|(p, q)| p == q).count() as u32
    }

    pub fn metric(&self, x: Word, y: Word) -> Result<Distance> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.distance(x, y))
    }

    pub(crate) fn distance(&self, x: Word, y: Word) -> Distance {
        if x == y {
            Distance::Zero
        } else {
            Distance::Pow(self.lcp(x, y))
        }
    }

    /// Smallest positive exponent `j` such that fattening by `2^-j` is the
    /// identity on every set (no two distinct points are closer than `2^-j`).
    pub fn resolution_exponent(&self) -> u32 {
        self.depth.saturating_sub(1)
    }

    /// A radius strictly below every positive distance: `2^-(depth+1)`.
    pub fn floor_radius(&self) -> DyadicRadius {
        DyadicRadius::Pow(self.depth + 1)
    }

    fn block(&self, len: u32, w: Word) -> u32 {
        self.blocks[len.min(self.depth) as usize][w.index()]
    }

    fn block_count(&self, len: u32) -> usize {
        self.blocks[len.min(self.depth) as usize].last().map_or(0, |&b| b as usize + 1)
    }
}

fn check_shape(alphabet: u32, depth: u32) -> Result<()> {
    if alphabet < 2 || alphabet as usize > SYMBOLS.len() {
        return Err(Error::Spec(format!("alphabet size {alphabet} must lie in 2..={}", SYMBOLS.len())));
    }
    if depth < 1 || depth > 32 {
        return Err(Error::Spec(format!("depth {depth} must lie in 1..=32")));
    }
    Ok(())
}

/// An exact subset of a unit space. At finite depth every subset is clopen.
#[derive(Clone)]
pub struct ClopenSet {
    space: Arc<UnitSpace>,
    bits: FixedBitSet,
}

impl PartialEq for ClopenSet {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.bits == other.bits
    }
}

impl Eq for ClopenSet {}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, w) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.space.format(w))?;
        }
        write!(f, "}}")
    }
}

fn same_space(a: &Arc<UnitSpace>, b: &Arc<UnitSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// JSON document for a clopen set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClopenDoc {
    pub alphabet: u32,
    pub depth: u32,
    pub words: Vec<String>,
}

impl ClopenSet {
    pub fn empty(space: &Arc<UnitSpace>) -> Self {
        ClopenSet {
            space: space.clone(),
            bits: FixedBitSet::with_capacity(space.len()),
        }
    }

    pub fn full(space: &Arc<UnitSpace>) -> Self {
        let mut set = Self::empty(space);
        set.bits.insert_range(..);
        set
    }

    pub fn from_words(space: &Arc<UnitSpace>, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut set = Self::empty(space);
        for w in words {
            space.check_point(w)?;
            set.bits.insert(w.index());
        }
        Ok(set)
    }

    /// The cylinder of all points starting with `prefix`.
    pub fn cylinder(space: &Arc<UnitSpace>, prefix: &str) -> Result<Self> {
        let symbols = space.parse_symbols(prefix)?;
        if symbols.len() > space.depth() as usize {
            return Err(Error::Spec(format!("prefix {prefix:?} is longer than the depth {}", space.depth())));
        }
        let mut set = Self::empty(space);
        for w in space.points() {
            if space.symbols(w).starts_with(&symbols) {
                set.bits.insert(w.index());
            }
        }
        Ok(set)
    }

    pub(crate) fn from_predicate(space: &Arc<UnitSpace>, mut keep: impl FnMut(Word) -> bool) -> Self {
        let mut set = Self::empty(space);
        for w in space.points() {
            if keep(w) {
                set.bits.insert(w.index());
            }
        }
        set
    }

    pub fn space(&self) -> &Arc<UnitSpace> {
        &self.space
    }

    pub fn contains(&self, w: Word) -> bool {
        self.bits.contains(w.index())
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.space.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = Word> + '_ {
        self.bits.ones().map(|i| Word(i as u32))
    }

    pub(crate) fn insert(&mut self, w: Word) {
        self.bits.insert(w.index());
    }

    fn compatible(&self, other: &ClopenSet) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::Usage("sets live in different unit spaces".into()))
        }
    }

    pub fn union(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.compatible(other)?;
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Ok(ClopenSet { space: self.space.clone(), bits })
    }

    pub fn intersection(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.compatible(other)?;
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(ClopenSet { space: self.space.clone(), bits })
    }

    pub fn difference(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.compatible(other)?;
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Ok(ClopenSet { space: self.space.clone(), bits })
    }

    pub fn complement(&self) -> ClopenSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        ClopenSet { space: self.space.clone(), bits }
    }

    pub fn is_subset(&self, other: &ClopenSet) -> Result<bool> {
        self.compatible(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> Result<bool> {
        self.compatible(other)?;
        Ok(self.bits.is_disjoint(&other.bits))
    }

    /// `d(x, self)`, or `None` for the empty set (infinite distance).
    pub fn distance_to(&self, x: Word) -> Option<Distance> {
        if self.contains(x) {
            return Some(Distance::Zero);
        }
        self.iter().map(|a| self.space.lcp(x, a)).max().map(Distance::Pow)
    }

    /// `A^ε = {x : d(x, A) < ε}`.
    ///
    /// With `ε = 2^-j` this is the union of the length-`j+1` cylinders that
    /// meet `A`.
    pub fn fatten(&self, radius: DyadicRadius) -> ClopenSet {
        match radius {
            DyadicRadius::Zero => ClopenSet::empty(&self.space),
            DyadicRadius::OnePlus => {
                if self.is_empty() {
                    ClopenSet::empty(&self.space)
                } else {
                    ClopenSet::full(&self.space)
                }
            }
            DyadicRadius::Pow(j) => {
                let len = j.saturating_add(1);
                if len >= self.space.depth() {
                    return self.clone();
                }
                let mut hit = FixedBitSet::with_capacity(self.space.block_count(len));
                for a in self.iter() {
                    hit.insert(self.space.block(len, a) as usize);
                }
                ClopenSet::from_predicate(&self.space, |x| hit.contains(self.space.block(len, x) as usize))
            }
        }
    }

    /// `A^-ε = {x : d(x, X \ A) > ε}`, with the distance to the empty set
    /// taken as +∞.
    ///
    /// With `ε = 2^-j` this is the union of the length-`j` cylinders
    /// contained in `A`.
    pub fn shrink(&self, radius: DyadicRadius) -> ClopenSet {
        match radius {
            DyadicRadius::Zero => self.clone(),
            DyadicRadius::OnePlus => {
                if self.is_full() {
                    self.clone()
                } else {
                    ClopenSet::empty(&self.space)
                }
            }
            DyadicRadius::Pow(j) => {
                if j >= self.space.depth() {
                    return self.clone();
                }
                let mut outside = FixedBitSet::with_capacity(self.space.block_count(j));
                for x in self.space.points() {
                    if !self.contains(x) {
                        outside.insert(self.space.block(j, x) as usize);
                    }
                }
                ClopenSet::from_predicate(&self.space, |x| {
                    self.contains(x) && !outside.contains(self.space.block(j, x) as usize)
                })
            }
        }
    }

    pub fn to_doc(&self) -> ClopenDoc {
        ClopenDoc {
            alphabet: self.space.alphabet(),
            depth: self.space.depth(),
            words: self.iter().map(|w| self.space.format(w)).collect(),
        }
    }

    pub fn from_doc(space: &Arc<UnitSpace>, doc: &ClopenDoc) -> Result<Self> {
        if doc.alphabet != space.alphabet() || doc.depth != space.depth() {
            return Err(Error::Usage(format!(
                "set over alphabet {} depth {} does not match unit space alphabet {} depth {}",
                doc.alphabet,
                doc.depth,
                space.alphabet(),
                space.depth()
            )));
        }
        let words = doc.words.iter().map(|w| space.parse_word(w)).collect::<Result<Vec<_>>>()?;
        ClopenSet::from_words(space, words)
    }

    /// Parses the set-expression grammar used on the command line:
    ///
    /// ```text
    /// expr := term ('+' term)*
    /// term := '~' term | '[' prefix ']' | '{' word (',' word)* '}' | '{}' | '*' | '(' expr ')'
    /// ```
    pub fn parse_expr(space: &Arc<UnitSpace>, text: &str) -> Result<Self> {
        let mut parser = ExprParser {
            space,
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        let set = parser.expr()?;
        if parser.pos != parser.chars.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(set)
    }
}

struct ExprParser<'a> {
    space: &'a Arc<UnitSpace>,
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, what: &str) -> Error {
        let text: String = self.chars.iter().collect();
        Error::Spec(format!("set expression {text:?}: {what} at position {}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<ClopenSet> {
        let mut set = self.term()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            set = set.union(&self.term()?)?;
        }
        Ok(set)
    }

    fn take_until(&mut self, close: char) -> Result<String> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == close {
                let body = self.chars[start..self.pos].iter().collect();
                self.pos += 1;
                return Ok(body);
            }
            self.pos += 1;
        }
        Err(self.error(&format!("missing {close:?}")))
    }

    fn term(&mut self) -> Result<ClopenSet> {
        match self.peek() {
            Some('~') => {
                self.pos += 1;
                Ok(self.term()?.complement())
            }
            Some('*') => {
                self.pos += 1;
                Ok(ClopenSet::full(self.space))
            }
            Some('[') => {
                self.pos += 1;
                let prefix = self.take_until(']')?;
                ClopenSet::cylinder(self.space, &prefix)
            }
            Some('{') => {
                self.pos += 1;
                let body = self.take_until('}')?;
                let words = body
                    .split(',')
                    .filter(|w| !w.is_empty())
                    .map(|w| self.space.parse_word(w))
                    .collect::<Result<Vec<_>>>()?;
                ClopenSet::from_words(self.space, words)
            }
            Some('(') => {
                self.pos += 1;
                let set = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("missing ')'"));
                }
                self.pos += 1;
                Ok(set)
            }
            _ => Err(self.error("expected a set term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn space3() -> Arc<UnitSpace> {
        UnitSpace::new(2, 3).unwrap()
    }

    fn set(space: &Arc<UnitSpace>, expr: &str) -> ClopenSet {
        ClopenSet::parse_expr(space, expr).unwrap()
    }

    #[test]
    fn point_count_and_order() {
        let s = space3();
        assert_eq!(s.len(), 8);
        assert_eq!(s.format(Word(0)), "000");
        assert_eq!(s.format(Word(3)), "011");
        assert_eq!(s.parse_word("110").unwrap(), Word(6));
        assert!(UnitSpace::with_max_points(2, 20, 1000).is_err());
        assert!(UnitSpace::new(1, 3).is_err());
    }

    #[test]
    fn metric_examples() {
        let s = space3();
        let w = |t: &str| s.parse_word(t).unwrap();
        assert_eq!(s.metric(w("000"), w("000")).unwrap().value(), rat(0, 1));
        assert_eq!(s.metric(w("000"), w("001")).unwrap().value(), rat(1, 4));
        assert_eq!(s.metric(w("000"), w("100")).unwrap().value(), rat(1, 1));
        assert!(s.metric(w("000"), Word(99)).is_err());
    }

    #[test]
    fn fatten_examples() {
        let s = space3();
        assert_eq!(set(&s, "{000}").fatten(DyadicRadius::Pow(1)), set(&s, "{000,001}"));
        assert_eq!(set(&s, "{010}").fatten(DyadicRadius::OnePlus), ClopenSet::full(&s));
        assert_eq!(set(&s, "[0]").fatten(DyadicRadius::Pow(1)), set(&s, "[0]"));
        assert!(ClopenSet::empty(&s).fatten(DyadicRadius::Pow(0)).is_empty());
    }

    #[test]
    fn shrink_examples() {
        let s = space3();
        assert_eq!(set(&s, "[0]").shrink(DyadicRadius::Pow(2)), set(&s, "[0]"));
        assert!(set(&s, "{000}").shrink(DyadicRadius::Pow(2)).is_empty());
        assert_eq!(ClopenSet::full(&s).shrink(DyadicRadius::Pow(1)), ClopenSet::full(&s));
        assert_eq!(ClopenSet::full(&s).shrink(DyadicRadius::OnePlus), ClopenSet::full(&s));
    }

    #[test]
    fn set_algebra_examples() {
        let s = space3();
        assert_eq!(set(&s, "[0]").complement(), set(&s, "[1]"));
        assert_eq!(set(&s, "[00]").union(&set(&s, "[01]")).unwrap(), set(&s, "[0]"));
        assert_eq!(set(&s, "[0]").len(), 4);
        let other = UnitSpace::new(2, 4).unwrap();
        assert!(matches!(
            set(&s, "[0]").union(&ClopenSet::full(&other)),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn expression_grammar() {
        let s = space3();
        assert_eq!(set(&s, "~[0]+{000}"), set(&s, "[1]+{000}"));
        assert_eq!(set(&s, "~([0]+[11])"), set(&s, "[10]"));
        assert_eq!(set(&s, "{}"), ClopenSet::empty(&s));
        assert_eq!(set(&s, "*"), ClopenSet::full(&s));
        assert!(ClopenSet::parse_expr(&s, "[0").is_err());
        assert!(ClopenSet::parse_expr(&s, "{0000}").is_err());
        assert!(ClopenSet::parse_expr(&s, "[2]").is_err());
    }

    #[test]
    fn doc_round_trip() {
        let s = space3();
        let a = set(&s, "[01]+{111}");
        let doc = a.to_doc();
        assert_eq!(doc.words, vec!["010", "011", "111"]);
        let json = serde_json::to_string(&doc).unwrap();
        let back: ClopenDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(ClopenSet::from_doc(&s, &back).unwrap(), a);
        let wrong = UnitSpace::new(3, 3).unwrap();
        assert!(ClopenSet::from_doc(&wrong, &doc).is_err());
    }

    #[test]
    fn radius_rounding() {
        assert_eq!(DyadicRadius::Pow(4).scaled_up(3), DyadicRadius::Pow(2));
        assert_eq!(DyadicRadius::Pow(4).scaled_up(2), DyadicRadius::Pow(3));
        assert_eq!(DyadicRadius::Pow(1).scaled_up(3), DyadicRadius::OnePlus);
        assert_eq!(DyadicRadius::Pow(0).scaled_up(2), DyadicRadius::OnePlus);
        assert!(DyadicRadius::Pow(3) < DyadicRadius::Pow(2));
        assert!(DyadicRadius::Zero < DyadicRadius::Pow(40));
        assert!(DyadicRadius::Pow(0) < DyadicRadius::OnePlus);
    }

    #[test]
    fn subset_space_metric() {
        let s = UnitSpace::from_words(3, 2, vec![vec![0, 0], vec![0, 2], vec![1, 1]]).unwrap();
        assert_eq!(s.len(), 3);
        assert!(!s.is_full());
        let a = ClopenSet::cylinder(&s, "0").unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a.complement().len(), 1);
        assert_eq!(
            ClopenSet::from_words(&s, [Word(0)]).unwrap().fatten(DyadicRadius::Pow(0)),
            a
        );
    }
}
