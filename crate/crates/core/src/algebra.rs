//! Free *-algebra scaffolding: generators over a finite momentum lattice,
//! words, formal sums, and multi-leg tensor products. No relations are
//! imposed at this layer; normal ordering lives in [`crate::rewrite`].

use crate::scalar::LaurentScalar;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(AlphabetClass, AlphabetClass),
    #[error("tensor leg mismatch")]
    LegMismatch,
    #[error("index {index} out of range for lattice of size {n}")]
    IndexOutOfRange { index: u32, n: u32 },
    #[error("generator `{name}` expects {expected} indices, got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
}

/// Finite momentum lattice with points `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lattice(u32);

impl Lattice {
    pub fn new(n: u32) -> Self {
        assert!(n >= 1, "lattice must contain at least one point");
        Lattice(n)
    }

    pub fn size(&self) -> u32 {
        self.0
    }

    pub fn points(&self) -> impl Iterator<Item = u32> {
        1..=self.0
    }

    pub fn contains(&self, index: u32) -> bool {
        (1..=self.0).contains(&index)
    }
}

/// Which free algebra a generator belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlphabetClass {
    /// Annihilation/creation operators `a`, `ad`.
    Oscillator,
    /// Transformation parameters `al`, `als`, `b`, `bs`, `f`, `fs` (plus the
    /// formal determinant pair used by the antipode construction).
    Group,
}

impl fmt::Display for AlphabetClass {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphabetClass::Oscillator => write!(out, "oscillator"),
            AlphabetClass::Group => write!(out, "group"),
        }
    }
}

/// Generator kinds. The variant order within each alphabet class is the
/// normal-order position: a word is normally ordered when its generators are
/// ascending under `(Kind, indices)`. For the oscillator this puts every `ad`
/// left of every `a`; for the group algebra it puts `fs` leftmost and `al`
/// rightmost, matching the orientation of the defining relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    ADag,
    A,
    FStar,
    F,
    BetaStar,
    Beta,
    AlphaStar,
    Alpha,
    /// Formal quantum determinant, adjoined for the antipode check at n = 1.
    Det,
    /// Formal inverse of [`Kind::Det`].
    DetInv,
}

impl Kind {
    pub fn class(&self) -> AlphabetClass {
        match self {
            Kind::A | Kind::ADag => AlphabetClass::Oscillator,
            _ => AlphabetClass::Group,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Kind::A | Kind::ADag | Kind::F | Kind::FStar => 1,
            Kind::Alpha | Kind::AlphaStar | Kind::Beta | Kind::BetaStar => 2,
            Kind::Det | Kind::DetInv => 0,
        }
    }

    /// Weight used by the termination order: `f`-kinds count 2, the rest 1.
    pub fn weight(&self) -> u64 {
        match self {
            Kind::F | Kind::FStar => 2,
            _ => 1,
        }
    }

    /// Hermitean conjugation on kinds. The determinant is star-invariant.
    pub fn star(&self) -> Kind {
        match self {
            Kind::A => Kind::ADag,
            Kind::ADag => Kind::A,
            Kind::Alpha => Kind::AlphaStar,
            Kind::AlphaStar => Kind::Alpha,
            Kind::Beta => Kind::BetaStar,
            Kind::BetaStar => Kind::Beta,
            Kind::F => Kind::FStar,
            Kind::FStar => Kind::F,
            Kind::Det => Kind::Det,
            Kind::DetInv => Kind::DetInv,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kind::A => "a",
            Kind::ADag => "ad",
            Kind::Alpha => "al",
            Kind::AlphaStar => "als",
            Kind::Beta => "b",
            Kind::BetaStar => "bs",
            Kind::F => "f",
            Kind::FStar => "fs",
            Kind::Det => "d",
            Kind::DetInv => "dinv",
        }
    }

    pub fn from_name(name: &str) -> Option<Kind> {
        Some(match name {
            "a" => Kind::A,
            "ad" => Kind::ADag,
            "al" => Kind::Alpha,
            "als" => Kind::AlphaStar,
            "b" => Kind::Beta,
            "bs" => Kind::BetaStar,
            "f" => Kind::F,
            "fs" => Kind::FStar,
            _ => return None,
        })
    }
}

/// One symbol instance: a kind plus its lattice indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    kind: Kind,
    idx: [u32; 2],
}

impl Generator {
    pub fn new(kind: Kind, indices: &[u32]) -> Result<Self, AlgebraError> {
        if indices.len() != kind.arity() {
            return Err(AlgebraError::Arity {
                name: kind.name().to_string(),
                expected: kind.arity(),
                got: indices.len(),
            });
        }
        let mut idx = [0u32; 2];
        idx[..indices.len()].copy_from_slice(indices);
        Ok(Generator { kind, idx })
    }

    pub fn a(p: u32) -> Self {
        Generator::new(Kind::A, &[p]).unwrap()
    }

    pub fn adag(p: u32) -> Self {
        Generator::new(Kind::ADag, &[p]).unwrap()
    }

    pub fn alpha(p: u32, k: u32) -> Self {
        Generator::new(Kind::Alpha, &[p, k]).unwrap()
    }

    pub fn alpha_star(p: u32, k: u32) -> Self {
        Generator::new(Kind::AlphaStar, &[p, k]).unwrap()
    }

    pub fn beta(p: u32, k: u32) -> Self {
        Generator::new(Kind::Beta, &[p, k]).unwrap()
    }

    pub fn beta_star(p: u32, k: u32) -> Self {
        Generator::new(Kind::BetaStar, &[p, k]).unwrap()
    }

    pub fn f(p: u32) -> Self {
        Generator::new(Kind::F, &[p]).unwrap()
    }

    pub fn f_star(p: u32) -> Self {
        Generator::new(Kind::FStar, &[p]).unwrap()
    }

    pub fn det() -> Self {
        Generator::new(Kind::Det, &[]).unwrap()
    }

    pub fn det_inv() -> Self {
        Generator::new(Kind::DetInv, &[]).unwrap()
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn indices(&self) -> &[u32] {
        &self.idx[..self.kind.arity()]
    }

    pub fn class(&self) -> AlphabetClass {
        self.kind.class()
    }

    pub fn star(&self) -> Generator {
        Generator {
            kind: self.kind.star(),
            idx: self.idx,
        }
    }

    pub fn validate_indices(&self, lattice: Lattice) -> Result<(), AlgebraError> {
        for &i in self.indices() {
            if !lattice.contains(i) {
                return Err(AlgebraError::IndexOutOfRange {
                    index: i,
                    n: lattice.size(),
                });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut arr = vec![json!(self.kind.name())];
        arr.extend(self.indices().iter().map(|i| json!(i)));
        Value::Array(arr)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.kind.name())?;
        if self.kind.arity() > 0 {
            let idx: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
            write!(out, "({})", idx.join(","))?;
        }
        Ok(())
    }
}

/// Finite product of generators; the empty word is the multiplicative unit.
/// All factors of a word share one alphabet class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn unit() -> Self {
        Word::default()
    }

    pub fn single(g: Generator) -> Self {
        Word(vec![g])
    }

    pub fn from_factors(factors: Vec<Generator>) -> Self {
        let w = Word(factors);
        debug_assert!(w.class_is_consistent(), "mixed-alphabet word: {w}");
        w
    }

    fn class_is_consistent(&self) -> bool {
        let mut classes = self.0.iter().map(|g| g.class());
        match classes.next() {
            None => true,
            Some(first) => classes.all(|c| c == first),
        }
    }

    pub fn factors(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn class(&self) -> Option<AlphabetClass> {
        self.0.first().map(|g| g.class())
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|g| g.kind().weight()).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut factors = self.0.clone();
        factors.extend_from_slice(&other.0);
        Word::from_factors(factors)
    }

    /// Antilinear involution on words: reverse the factor sequence and swap
    /// each kind with its starred partner.
    pub fn star(&self) -> Word {
        Word(self.0.iter().rev().map(|g| g.star()).collect())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|g| g.to_json()).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(out, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        write!(out, "{}", parts.join("*"))
    }
}

/// Canonical term order used for rendering: longer words first, then the
/// factor sequence ascending under the generator order.
fn render_cmp(a: &Word, b: &Word) -> std::cmp::Ordering {
    b.len().cmp(&a.len()).then_with(|| a.cmp(b))
}

fn render_cmp_multi(a: &[Word], b: &[Word]) -> std::cmp::Ordering {
    let la: usize = a.iter().map(Word::len).sum();
    let lb: usize = b.iter().map(Word::len).sum();
    lb.cmp(&la).then_with(|| a.cmp(b))
}

/// Writes `coeff * word` with the conventions used across golden output:
/// a unit coefficient is dropped, single monomials multiply bare, and
/// multi-term scalars are parenthesized.
fn push_term(
    out: &mut String,
    first: bool,
    coeff: &LaurentScalar,
    body: Option<String>,
) {
    let (c, negative) = match coeff.as_unit_monomial() {
        Some((r, _)) if r.is_negative() => (-coeff, true),
        _ => (coeff.clone(), false),
    };
    if first {
        if negative {
            out.push('-');
        }
    } else if negative {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    let coeff_text = if c.as_unit_monomial().is_some() {
        c.to_string()
    } else {
        format!("({c})")
    };
    match body {
        None => out.push_str(&coeff_text),
        Some(b) => {
            if c.is_one() {
                out.push_str(&b);
            } else {
                out.push_str(&coeff_text);
                out.push('*');
                out.push_str(&b);
            }
        }
    }
}

/// Finite formal sum of words with [`LaurentScalar`] coefficients. No zero
/// coefficient is ever stored; equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<Word, LaurentScalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Element::from_term(Word::unit(), LaurentScalar::one())
    }

    pub fn scalar(c: LaurentScalar) -> Self {
        Element::from_term(Word::unit(), c)
    }

    pub fn from_word(w: Word) -> Self {
        Element::from_term(w, LaurentScalar::one())
    }

    pub fn from_generator(g: Generator) -> Self {
        Element::from_word(Word::single(g))
    }

    pub fn from_term(w: Word, c: LaurentScalar) -> Self {
        let mut e = Element::zero();
        e.add_term(w, c);
        e
    }

    pub(crate) fn from_map(terms: BTreeMap<Word, LaurentScalar>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Element { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> LaurentScalar {
        self.terms.get(w).cloned().unwrap_or_else(LaurentScalar::zero)
    }

    /// The alphabet class of the non-scalar part, if any.
    pub fn class(&self) -> Option<AlphabetClass> {
        self.terms.keys().find_map(|w| w.class())
    }

    pub(crate) fn add_term(&mut self, w: Word, c: LaurentScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn scale(&self, c: &LaurentScalar) -> Element {
        let mut out = Element::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    /// Free product: bilinear extension of word concatenation.
    pub fn checked_mul(&self, rhs: &Element) -> Result<Element, AlgebraError> {
        if let (Some(a), Some(b)) = (self.class(), rhs.class()) {
            if a != b {
                return Err(AlgebraError::AlphabetMismatch(a, b));
            }
        }
        let mut out = Element::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Antilinear involution: reverse words, swap starred kinds; `q` is a
    /// real deformation parameter so coefficients are left untouched.
    pub fn star(&self) -> Element {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            out.add_term(w.star(), c.clone());
        }
        out
    }

    /// Apply a coefficient map, dropping terms that die (used for `q = 1`
    /// and `--q` specialization).
    pub fn map_coeffs<F>(&self, f: F) -> Element
    where
        F: Fn(&LaurentScalar) -> LaurentScalar,
    {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Place the element into one leg of a tensor product, unit words in all
    /// other legs. Multiplicative: `embed(xy) = embed(x)*embed(y)`.
    pub fn embed_leg(
        &self,
        leg: usize,
        legs: &[AlphabetClass],
    ) -> Result<TensorElement, AlgebraError> {
        if leg >= legs.len() {
            return Err(AlgebraError::LegMismatch);
        }
        if let Some(c) = self.class() {
            if c != legs[leg] {
                return Err(AlgebraError::AlphabetMismatch(c, legs[leg]));
            }
        }
        let mut out = TensorElement::zero(legs.to_vec());
        for (w, c) in &self.terms {
            let mut words = vec![Word::unit(); legs.len()];
            words[leg] = w.clone();
            out.add_term(words, c.clone());
        }
        Ok(out)
    }

    /// Canonical term order: longer words first, ties by the factor order.
    pub fn sorted_terms(&self) -> Vec<(&Word, &LaurentScalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| render_cmp(a.0, b.0));
        v
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.sorted_terms()
                .into_iter()
                .map(|(w, c)| json!({ "coeff": c.to_string(), "word": w.to_json() }))
                .collect(),
        )
    }
}

impl fmt::Display for Element {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let mut text = String::new();
        for (i, (w, c)) in self.sorted_terms().into_iter().enumerate() {
            let body = if w.is_empty() {
                None
            } else {
                Some(w.to_string())
            };
            push_term(&mut text, i == 0, c, body);
        }
        write!(out, "{text}")
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self + &(-rhs)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        let mut out = Element::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.checked_mul(rhs).expect("alphabet mismatch in product")
    }
}

/// Formal sum over tuples of words, one per tensor leg. Multiplication is
/// strictly leg-wise (no braiding); each leg has a fixed alphabet class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorElement {
    legs: Vec<AlphabetClass>,
    terms: BTreeMap<Vec<Word>, LaurentScalar>,
}

impl TensorElement {
    pub fn zero(legs: Vec<AlphabetClass>) -> Self {
        assert!(!legs.is_empty(), "tensor product needs at least one leg");
        TensorElement {
            legs,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(legs: Vec<AlphabetClass>) -> Self {
        let n = legs.len();
        let mut t = TensorElement::zero(legs);
        t.add_term(vec![Word::unit(); n], LaurentScalar::one());
        t
    }

    pub fn from_term(legs: Vec<AlphabetClass>, words: Vec<Word>, c: LaurentScalar) -> Self {
        let mut t = TensorElement::zero(legs);
        t.add_term(words, c);
        t
    }

    pub fn legs(&self) -> &[AlphabetClass] {
        &self.legs
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &LaurentScalar)> {
        self.terms.iter()
    }

    pub(crate) fn add_term(&mut self, words: Vec<Word>, c: LaurentScalar) {
        debug_assert_eq!(words.len(), self.legs.len());
        debug_assert!(words
            .iter()
            .zip(&self.legs)
            .all(|(w, leg)| w.class().map(|c| c == *leg).unwrap_or(true)));
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&words) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&words);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(words, c);
            }
        }
    }

    pub(crate) fn from_map(
        legs: Vec<AlphabetClass>,
        terms: BTreeMap<Vec<Word>, LaurentScalar>,
    ) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        TensorElement { legs, terms }
    }

    pub fn scale(&self, c: &LaurentScalar) -> TensorElement {
        let mut out = TensorElement::zero(self.legs.clone());
        for (ws, x) in &self.terms {
            out.add_term(ws.clone(), x * c);
        }
        out
    }

    /// Leg-wise product: `(u1 (x) u2)(v1 (x) v2) = u1v1 (x) u2v2`.
    pub fn checked_mul(&self, rhs: &TensorElement) -> Result<TensorElement, AlgebraError> {
        if self.legs != rhs.legs {
            return Err(AlgebraError::LegMismatch);
        }
        let mut out = TensorElement::zero(self.legs.clone());
        for (ws1, c1) in &self.terms {
            for (ws2, c2) in &rhs.terms {
                let words: Vec<Word> = ws1
                    .iter()
                    .zip(ws2)
                    .map(|(a, b)| a.concat(b))
                    .collect();
                out.add_term(words, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Star applied independently inside each leg.
    pub fn star_legwise(&self) -> TensorElement {
        let mut out = TensorElement::zero(self.legs.clone());
        for (ws, c) in &self.terms {
            out.add_term(ws.iter().map(Word::star).collect(), c.clone());
        }
        out
    }

    pub fn map_coeffs<F>(&self, f: F) -> TensorElement
    where
        F: Fn(&LaurentScalar) -> LaurentScalar,
    {
        let mut out = TensorElement::zero(self.legs.clone());
        for (ws, c) in &self.terms {
            out.add_term(ws.clone(), f(c));
        }
        out
    }

    /// View a one-leg tensor as a plain element.
    pub fn into_element(self) -> Result<Element, AlgebraError> {
        if self.legs.len() != 1 {
            return Err(AlgebraError::LegMismatch);
        }
        let mut out = Element::zero();
        for (ws, c) in self.terms {
            out.add_term(ws.into_iter().next().unwrap(), c);
        }
        Ok(out)
    }

    pub fn sorted_terms(&self) -> Vec<(&Vec<Word>, &LaurentScalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| render_cmp_multi(a.0, b.0));
        v
    }

    pub fn to_json(&self) -> Value {
        json!({
            "legs": self.legs.len(),
            "terms": self
                .sorted_terms()
                .into_iter()
                .map(|(ws, c)| {
                    json!({
                        "coeff": c.to_string(),
                        "words": ws.iter().map(Word::to_json).collect::<Vec<_>>(),
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let mut text = String::new();
        for (i, (ws, c)) in self.sorted_terms().into_iter().enumerate() {
            let body: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
            push_term(&mut text, i == 0, c, Some(body.join(" (x) ")));
        }
        write!(out, "{text}")
    }
}

impl Add for &TensorElement {
    type Output = TensorElement;
    fn add(self, rhs: &TensorElement) -> TensorElement {
        assert_eq!(self.legs, rhs.legs, "tensor leg mismatch in sum");
        let mut out = self.clone();
        for (ws, c) in &rhs.terms {
            out.add_term(ws.clone(), c.clone());
        }
        out
    }
}

impl Sub for &TensorElement {
    type Output = TensorElement;
    fn sub(self, rhs: &TensorElement) -> TensorElement {
        self + &(-rhs)
    }
}

impl Neg for &TensorElement {
    type Output = TensorElement;
    fn neg(self) -> TensorElement {
        let mut out = TensorElement::zero(self.legs.clone());
        for (ws, c) in &self.terms {
            out.add_term(ws.clone(), -c);
        }
        out
    }
}

impl Mul for &TensorElement {
    type Output = TensorElement;
    fn mul(self, rhs: &TensorElement) -> TensorElement {
        self.checked_mul(rhs).expect("tensor leg mismatch in product")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ls(n: i64) -> LaurentScalar {
        LaurentScalar::from_int(n)
    }

    #[test]
    fn elem_mul_concatenates_without_relations() {
        let x = Element::from_generator(Generator::a(1));
        let y = Element::from_generator(Generator::adag(1));
        let xy = &x * &y;
        let expected = Element::from_word(Word::from_factors(vec![
            Generator::a(1),
            Generator::adag(1),
        ]));
        assert_eq!(xy, expected);
        assert_eq!(&x * &Element::one(), x);
    }

    #[test]
    fn elem_mul_distributes() {
        let x = &Element::from_generator(Generator::a(1)) + &Element::from_generator(Generator::a(2));
        let y = Element::from_generator(Generator::a(1));
        let lhs = &x * &y;
        let a1a1 = Element::from_word(Word::from_factors(vec![Generator::a(1), Generator::a(1)]));
        let a2a1 = Element::from_word(Word::from_factors(vec![Generator::a(2), Generator::a(1)]));
        assert_eq!(lhs, &a1a1 + &a2a1);
    }

    #[test]
    fn elem_mul_rejects_mixed_alphabets() {
        let x = Element::from_generator(Generator::a(1));
        let y = Element::from_generator(Generator::alpha(1, 1));
        assert_eq!(
            x.checked_mul(&y),
            Err(AlgebraError::AlphabetMismatch(
                AlphabetClass::Oscillator,
                AlphabetClass::Group
            ))
        );
    }

    #[test]
    fn star_reverses_and_swaps() {
        let w = Word::from_factors(vec![Generator::a(1), Generator::adag(2)]);
        let starred = Element::from_word(w).star();
        let expected = Element::from_word(Word::from_factors(vec![
            Generator::a(2),
            Generator::adag(1),
        ]));
        assert_eq!(starred, expected);

        let qf = Element::from_term(Word::single(Generator::f(1)), LaurentScalar::q());
        let qfs = Element::from_term(Word::single(Generator::f_star(1)), LaurentScalar::q());
        assert_eq!(qf.star(), qfs);
    }

    #[test]
    fn tensor_mul_is_legwise() {
        let legs = vec![AlphabetClass::Group, AlphabetClass::Oscillator];
        let x = TensorElement::from_term(
            legs.clone(),
            vec![Word::single(Generator::alpha(1, 1)), Word::single(Generator::a(1))],
            ls(1),
        );
        let y = TensorElement::from_term(
            legs.clone(),
            vec![Word::single(Generator::beta(1, 1)), Word::single(Generator::adag(1))],
            ls(1),
        );
        let xy = &x * &y;
        let expected = TensorElement::from_term(
            legs.clone(),
            vec![
                Word::from_factors(vec![Generator::alpha(1, 1), Generator::beta(1, 1)]),
                Word::from_factors(vec![Generator::a(1), Generator::adag(1)]),
            ],
            ls(1),
        );
        assert_eq!(xy, expected);
        assert_eq!(&x * &TensorElement::unit(legs.clone()), x);

        // unit legs absorb
        let f = Element::from_generator(Generator::f(1)).embed_leg(0, &legs).unwrap();
        let a = Element::from_generator(Generator::a(1)).embed_leg(1, &legs).unwrap();
        let fa = &f * &a;
        let expected = TensorElement::from_term(
            legs,
            vec![Word::single(Generator::f(1)), Word::single(Generator::a(1))],
            ls(1),
        );
        assert_eq!(fa, expected);
    }

    #[test]
    fn embed_leg_carries_coefficients() {
        let legs = vec![
            AlphabetClass::Group,
            AlphabetClass::Group,
            AlphabetClass::Group,
        ];
        let qf = Element::from_term(Word::single(Generator::f(1)), LaurentScalar::q());
        let t = qf.embed_leg(1, &legs).unwrap();
        let expected = TensorElement::from_term(
            legs,
            vec![Word::unit(), Word::single(Generator::f(1)), Word::unit()],
            LaurentScalar::q(),
        );
        assert_eq!(t, expected);

        let one = Element::one();
        let legs2 = vec![AlphabetClass::Group, AlphabetClass::Oscillator];
        assert_eq!(
            one.embed_leg(0, &legs2).unwrap(),
            TensorElement::unit(legs2)
        );
    }

    #[test]
    fn rendering_matches_golden_forms() {
        let w = Word::from_factors(vec![Generator::adag(1), Generator::a(1)]);
        let e = &Element::from_term(w, LaurentScalar::q()) + &Element::one();
        assert_eq!(e.to_string(), "q*ad(1)*a(1) + 1");

        let neg = &Element::zero() - &Element::from_generator(Generator::a(1));
        assert_eq!(neg.to_string(), "-a(1)");

        let multi = Element::from_term(
            Word::single(Generator::a(1)),
            &LaurentScalar::one() + &LaurentScalar::q(),
        );
        assert_eq!(multi.to_string(), "(1 + q)*a(1)");
    }

    fn arb_osc_generator() -> impl Strategy<Value = Generator> {
        (0..2u32, 1..=2u32).prop_map(|(kind, p)| match kind {
            0 => Generator::a(p),
            _ => Generator::adag(p),
        })
    }

    fn arb_osc_element() -> impl Strategy<Value = Element> {
        prop::collection::vec(
            (prop::collection::vec(arb_osc_generator(), 0..3), -3i64..=3),
            1..3,
        )
        .prop_map(|terms| {
            let mut e = Element::zero();
            for (gens, c) in terms {
                e.add_term(Word::from_factors(gens), LaurentScalar::from_int(c));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn elem_mul_is_associative(
            x in arb_osc_element(),
            y in arb_osc_element(),
            z in arb_osc_element()
        ) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }

        #[test]
        fn star_is_an_antihomomorphism(x in arb_osc_element(), y in arb_osc_element()) {
            prop_assert_eq!((&x * &y).star(), &y.star() * &x.star());
            prop_assert_eq!(x.star().star(), x);
        }

        #[test]
        fn tensor_on_one_leg_agrees_with_elem_mul(x in arb_osc_element(), y in arb_osc_element()) {
            let legs = vec![AlphabetClass::Group, AlphabetClass::Oscillator];
            let tx = x.embed_leg(1, &legs).unwrap();
            let ty = y.embed_leg(1, &legs).unwrap();
            let product = &tx * &ty;
            let direct = (&x * &y).embed_leg(1, &legs).unwrap();
            prop_assert_eq!(product, direct);
        }
    }
}
