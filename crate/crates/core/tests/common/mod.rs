//! Shared test support: an all-orders brute-force reducer independent of the
//! engine's strategy, and deterministic random-word corpora.
//!
//! The brute forcer explores every admissible rewrite (any term, any
//! position) from a starting element and collects the set of reachable
//! irreducible elements. It reimplements application from the public rule
//! map on purpose: agreement with the engine is only evidence if the two
//! paths share nothing but the rules.

use qboson::{Element, Generator, LaurentScalar, RewriteSystem, TensorElement, Word};
use rand::Rng;
use std::collections::HashSet;

fn splice(word: &Word, at: usize, with: &Word) -> Word {
    let fs = word.factors();
    let mut out = Vec::with_capacity(fs.len() + with.len());
    out.extend_from_slice(&fs[..at]);
    out.extend_from_slice(with.factors());
    out.extend_from_slice(&fs[at + 2..]);
    Word::from_factors(out)
}

fn element_redexes(e: &Element, sys: &RewriteSystem) -> Vec<(Word, usize)> {
    let mut out = Vec::new();
    for (word, _) in e.terms() {
        let fs = word.factors();
        for i in 0..fs.len().saturating_sub(1) {
            if sys.rule(&fs[i], &fs[i + 1]).is_some() {
                out.push((word.clone(), i));
            }
        }
    }
    out
}

fn apply_once(e: &Element, word: &Word, at: usize, sys: &RewriteSystem) -> Element {
    let fs = word.factors();
    let rule = sys.rule(&fs[at], &fs[at + 1]).expect("redex has a rule");
    let coeff = e.coeff(word);
    assert!(!coeff.is_zero());
    let mut out = &*e - &Element::from_term(word.clone(), coeff.clone());
    for (rw, rc) in rule.replacement.terms() {
        out = &out + &Element::from_term(splice(word, at, rw), &coeff * rc);
    }
    out
}

/// Every irreducible element reachable by applying rules in all possible
/// orders at all possible positions. Panics if the state space exceeds
/// `state_limit` (which would make the oracle itself suspect).
pub fn all_order_normal_forms(
    start: &Element,
    sys: &RewriteSystem,
    state_limit: usize,
) -> Vec<Element> {
    let mut visited: HashSet<Element> = HashSet::new();
    let mut normal: HashSet<Element> = HashSet::new();
    let mut stack = vec![start.clone()];
    while let Some(e) = stack.pop() {
        if !visited.insert(e.clone()) {
            continue;
        }
        assert!(
            visited.len() <= state_limit,
            "brute-force state space exceeded {state_limit} elements"
        );
        let redexes = element_redexes(&e, sys);
        if redexes.is_empty() {
            normal.insert(e);
            continue;
        }
        for (word, at) in redexes {
            stack.push(apply_once(&e, &word, at, sys));
        }
    }
    normal.into_iter().collect()
}

/// Tensor variant: redexes range over every term, leg, and position.
pub fn all_order_normal_forms_tensor(
    start: &TensorElement,
    systems: &[&RewriteSystem],
    state_limit: usize,
) -> Vec<TensorElement> {
    fn redexes(t: &TensorElement, systems: &[&RewriteSystem]) -> Vec<(Vec<Word>, usize, usize)> {
        let mut out = Vec::new();
        for (words, _) in t.terms() {
            for (leg, word) in words.iter().enumerate() {
                let fs = word.factors();
                for i in 0..fs.len().saturating_sub(1) {
                    if systems[leg].rule(&fs[i], &fs[i + 1]).is_some() {
                        out.push((words.clone(), leg, i));
                    }
                }
            }
        }
        out
    }

    fn apply(
        t: &TensorElement,
        words: &[Word],
        leg: usize,
        at: usize,
        systems: &[&RewriteSystem],
    ) -> TensorElement {
        let fs = words[leg].factors();
        let rule = systems[leg]
            .rule(&fs[at], &fs[at + 1])
            .expect("redex has a rule");
        let coeff = t
            .terms()
            .find(|(ws, _)| ws.as_slice() == words)
            .map(|(_, c)| c.clone())
            .expect("term present");
        let legs = t.legs().to_vec();
        let mut out = &*t
            - &TensorElement::from_term(legs.clone(), words.to_vec(), coeff.clone());
        for (rw, rc) in rule.replacement.terms() {
            let mut new_words = words.to_vec();
            new_words[leg] = splice(&words[leg], at, rw);
            out = &out + &TensorElement::from_term(legs.clone(), new_words, &coeff * rc);
        }
        out
    }

    let mut visited: HashSet<TensorElement> = HashSet::new();
    let mut normal: HashSet<TensorElement> = HashSet::new();
    let mut stack = vec![start.clone()];
    while let Some(t) = stack.pop() {
        if !visited.insert(t.clone()) {
            continue;
        }
        assert!(
            visited.len() <= state_limit,
            "brute-force state space exceeded {state_limit} tensor elements"
        );
        let redexes = redexes(&t, systems);
        if redexes.is_empty() {
            normal.insert(t);
            continue;
        }
        for (words, leg, at) in redexes {
            stack.push(apply(&t, &words, leg, at, systems));
        }
    }
    normal.into_iter().collect()
}

pub fn random_oscillator_word(rng: &mut impl Rng, n: u32, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let gens = (0..len)
        .map(|_| {
            let p = rng.gen_range(1..=n);
            if rng.gen_bool(0.5) {
                Generator::a(p)
            } else {
                Generator::adag(p)
            }
        })
        .collect();
    Word::from_factors(gens)
}

pub fn random_group_word(rng: &mut impl Rng, n: u32, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let gens = (0..len)
        .map(|_| {
            let p = rng.gen_range(1..=n);
            let k = rng.gen_range(1..=n);
            match rng.gen_range(0..6) {
                0 => Generator::alpha(p, k),
                1 => Generator::alpha_star(p, k),
                2 => Generator::beta(p, k),
                3 => Generator::beta_star(p, k),
                4 => Generator::f(p),
                _ => Generator::f_star(p),
            }
        })
        .collect();
    Word::from_factors(gens)
}

/// A small random scalar with mixed signs and q-powers.
pub fn random_coeff(rng: &mut impl Rng) -> LaurentScalar {
    let c = [-2i64, -1, 1, 2, 3][rng.gen_range(0..5)];
    let k = rng.gen_range(-2i64..=2);
    LaurentScalar::monomial(qboson::Rational::integer(c), k)
}
