//! Binary words over {1, 2} indexing the Coulomb parametrix terms.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{binomial, rat, rat_int, QuadExtNumber, Rational};
use crate::kernelasm::FsTerm;
use crate::symbolcalc::{conormal_inverse, ConeOperator, MellinSymbol, OperatorFamily, SymbolError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WordsError {
    #[error("operator `{0}` is not of the Coulomb family")]
    NotCoulomb(String),
    #[error("letter {0} is not 1 or 2")]
    BadLetter(u8),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// Word `(alpha_1, ..., alpha_N)` with letters in {1, 2}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BinaryWord {
    letters: Vec<u8>,
}

impl BinaryWord {
    pub fn new(letters: Vec<u8>) -> Result<Self, WordsError> {
        if let Some(&bad) = letters.iter().find(|&&a| a != 1 && a != 2) {
            return Err(WordsError::BadLetter(bad));
        }
        Ok(BinaryWord { letters })
    }

    pub fn empty() -> Self {
        BinaryWord { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// `N`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `N_Z`, the number of 1s.
    pub fn n_z(&self) -> usize {
        self.letters.iter().filter(|&&a| a == 1).count()
    }

    /// `N_kappa`, the number of 2s.
    pub fn n_kappa(&self) -> usize {
        self.letters.iter().filter(|&&a| a == 2).count()
    }

    pub fn weight(&self) -> u64 {
        self.letters.iter().map(|&a| a as u64).sum()
    }

    /// `p_0 = p, p_j = p - sum_{k<=j} alpha_k`, length `N + 1`, ending in 0.
    pub fn partial_sums(&self) -> Vec<u64> {
        let mut p = self.weight();
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(p);
        for &a in &self.letters {
            p -= a as u64;
            out.push(p);
        }
        out
    }

    /// `alpha |_k`: append a letter.
    pub fn append(&self, letter: u8) -> Self {
        let mut letters = self.letters.clone();
        letters.push(letter);
        BinaryWord { letters }
    }

    /// `k| alpha`: prepend a letter.
    pub fn prepend(&self, letter: u8) -> Self {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.letters);
        BinaryWord { letters }
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.letters.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All words of weight `p` in lexicographic order (1 < 2); `S_0` is the empty word.
pub fn enumerate_words(p: u64) -> Vec<BinaryWord> {
    fn go(rest: u64, cur: &mut Vec<u8>, out: &mut Vec<BinaryWord>) {
        if rest == 0 {
            out.push(BinaryWord { letters: cur.clone() });
            return;
        }
        for a in [1u8, 2] {
            if a as u64 <= rest {
                cur.push(a);
                go(rest - a as u64, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(p, &mut Vec::new(), &mut out);
    out
}

/// `|S_p|` by the recurrence `|S_p| = |S_{p-1}| + |S_{p-2}|`, `|S_0| = |S_1| = 1`.
pub fn cardinality(p: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::one(), BigUint::one());
    for _ in 0..p {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}

/// `|S_p| = sum_{N_k} binom(p - N_k, N_k)`.
pub fn cardinality_binomial(p: u64) -> BigUint {
    (0..=p / 2).map(|k| binomial(p - k, k)).fold(BigUint::zero(), |s, x| s + x)
}

fn coulomb_params(op: &ConeOperator) -> Result<(Rational, Rational), WordsError> {
    match &op.family {
        OperatorFamily::Coulomb { z, kappa_sq } => Ok((z.clone(), kappa_sq.clone())),
        _ => Err(WordsError::NotCoulomb(op.name.clone())),
    }
}

/// `(-1)^{N_Z} 2^N Z^{N_Z} (kappa^2)^{N_kappa}`.
pub fn word_weight(word: &BinaryWord, z: &Rational, kappa_sq: &Rational) -> Rational {
    let sign = if word.n_z() % 2 == 0 { rat_int(1) } else { rat_int(-1) };
    sign * rat_int(2).pow(word.len() as i32) * z.pow(word.n_z() as i32) * kappa_sq.pow(word.n_kappa() as i32)
}

/// Order-p symbol as the word sum of shifted conormal inverses.
pub fn word_symbol(op: &ConeOperator, ell: usize, p: u64) -> Result<MellinSymbol, WordsError> {
    let (z, kappa_sq) = coulomb_params(op)?;
    let h0 = conormal_inverse(op, ell)?;
    let mut total = MellinSymbol::zero();
    for word in enumerate_words(p) {
        let c = word_weight(&word, &z, &kappa_sq);
        if c.is_zero() {
            continue;
        }
        let mut prod = MellinSymbol::constant(QuadExtNumber::rational(c));
        for pj in word.partial_sums() {
            let f = h0.shift_int(-(pj as i64)).map_err(SymbolError::from)?;
            prod = prod.checked_mul(&f).map_err(SymbolError::from)?;
        }
        total = total.checked_add(&prod).map_err(SymbolError::from)?;
    }
    Ok(total)
}

fn pj_product(ps: &[u64]) -> Rational {
    ps.iter()
        .map(|&q| Rational::one() / rat_int((q * (q - 1)) as i64))
        .fold(Rational::one(), |a, b| a * b)
}

/// Order-p coefficients of the n = 3 Coulomb fundamental solution, in the
/// format of `spherical_limit`: multiples of `pi^{-1} r^{-1}`.
pub fn coulomb_kp(p: u64, z: &Rational, kappa_sq: &Rational) -> Vec<FsTerm> {
    let quarter = rat(-1, 4);
    let mut plain = Rational::zero();
    let mut logc = Rational::zero();
    if p == 0 {
        plain = quarter.clone();
    } else {
        if p >= 2 {
            for beta in enumerate_words(p - 2) {
                let w = beta.append(2);
                let c = word_weight(&w, z, kappa_sq);
                if c.is_zero() {
                    continue;
                }
                let ps = w.partial_sums();
                plain += &quarter * c * pj_product(&ps[..w.len()]);
            }
        }
        for beta in enumerate_words(p - 1) {
            let w = beta.append(1);
            let c = word_weight(&w, z, kappa_sq);
            if c.is_zero() {
                continue;
            }
            let ps = w.partial_sums();
            let head = &ps[..w.len() - 1];
            let base = &quarter * c * pj_product(head);
            let s: Rational = head
                .iter()
                .map(|&q| Rational::one() / rat_int(q as i64 - 1) + Rational::one() / rat_int(q as i64))
                .fold(Rational::zero(), |a, b| a + b);
            logc += &base;
            plain -= base * s;
        }
    }
    let mut out = Vec::new();
    if !plain.is_zero() {
        out.push(FsTerm {
            coefficient: QuadExtNumber::rational(plain),
            log_r: false,
        });
    }
    if !logc.is_zero() {
        out.push(FsTerm {
            coefficient: QuadExtNumber::rational(logc),
            log_r: true,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{factorial, harmonic};
    use crate::kernelasm::spherical_limit;
    use crate::symbolcalc::asymptotic_symbol;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn w(v: &[u8]) -> BinaryWord {
        BinaryWord::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_sets() {
        assert_eq!(enumerate_words(0), vec![BinaryWord::empty()]);
        assert_eq!(enumerate_words(2), vec![w(&[1, 1]), w(&[2])]);
        assert_eq!(enumerate_words(3), vec![w(&[1, 1, 1]), w(&[1, 2]), w(&[2, 1])]);
        assert_eq!(
            enumerate_words(4),
            vec![w(&[1, 1, 1, 1]), w(&[1, 1, 2]), w(&[1, 2, 1]), w(&[2, 1, 1]), w(&[2, 2])]
        );
        assert!(BinaryWord::new(vec![3]).is_err());
    }

    #[test]
    fn cardinality_laws() {
        let small: Vec<u64> = (1..=4).map(|p| cardinality(p).try_into().unwrap()).collect();
        assert_eq!(small, vec![1, 2, 3, 5]);
        for p in 0..=30 {
            assert_eq!(cardinality(p), cardinality_binomial(p));
            if p >= 2 {
                assert_eq!(cardinality(p), cardinality(p - 1) + cardinality(p - 2));
            }
        }
        for p in 0..=20 {
            assert_eq!(BigUint::from(enumerate_words(p).len()), cardinality(p));
        }
    }

    #[test]
    fn decompositions() {
        for p in 2..=12u64 {
            let all: BTreeSet<_> = enumerate_words(p).into_iter().collect();
            let suf: BTreeSet<_> = enumerate_words(p - 1)
                .iter()
                .map(|b| b.append(1))
                .chain(enumerate_words(p - 2).iter().map(|b| b.append(2)))
                .collect();
            let pre: BTreeSet<_> = enumerate_words(p - 1)
                .iter()
                .map(|b| b.prepend(1))
                .chain(enumerate_words(p - 2).iter().map(|b| b.prepend(2)))
                .collect();
            assert_eq!(all, suf);
            assert_eq!(all, pre);
            assert_eq!(all.len(), enumerate_words(p - 1).len() + enumerate_words(p - 2).len());
        }
    }

    proptest! {
        #[test]
        fn partial_sums_descend(letters in proptest::collection::vec(1u8..=2, 0..20)) {
            let word = BinaryWord::new(letters).unwrap();
            let ps = word.partial_sums();
            prop_assert_eq!(ps[0], word.weight());
            prop_assert_eq!(*ps.last().unwrap(), 0);
            prop_assert!(ps.windows(2).all(|d| d[0] - d[1] == 1 || d[0] - d[1] == 2));
            prop_assert_eq!(word.n_z() + 2 * word.n_kappa(), word.weight() as usize);
        }
    }

    #[test]
    fn word_symbol_matches_recursion() {
        let op = ConeOperator::coulomb(rat(3, 2), rat(1, 3), 8).unwrap();
        for ell in 0..=3 {
            for p in 0..=8u64 {
                let a = word_symbol(&op, ell, p).unwrap();
                let b = asymptotic_symbol(&op, ell, p as usize).unwrap();
                assert_eq!(a, *b, "ell={ell} p={p}");
            }
        }
        let z0 = ConeOperator::coulomb(rat_int(0), rat_int(1), 5).unwrap();
        assert!(word_symbol(&z0, 0, 5).unwrap().is_zero());
        let lap = ConeOperator::laplacian(3, 2).unwrap();
        assert!(word_symbol(&lap, 0, 1).is_err());
    }

    #[test]
    fn kp_examples() {
        let z = rat(7, 5);
        assert_eq!(coulomb_kp(0, &z, &rat_int(1))[0].coefficient, QuadExtNumber::rational(rat(-1, 4)));
        let k1 = coulomb_kp(1, &z, &rat_int(1));
        assert_eq!(k1, vec![FsTerm { coefficient: QuadExtNumber::rational(&z / rat_int(2)), log_r: true }]);
        // -(1/4 pi r)[kappa^2 + 2 Z^2 (ln r - 3/2)] at p = 2
        let k2 = coulomb_kp(2, &z, &rat_int(3));
        let plain = -(rat_int(3) - rat_int(3) * &z * &z) / rat_int(4);
        let logc = -(rat_int(2) * &z * &z) / rat_int(4);
        assert_eq!(k2[0].coefficient, QuadExtNumber::rational(plain));
        assert_eq!(k2[1].coefficient, QuadExtNumber::rational(logc));
    }

    #[test]
    fn kp_matches_harmonic_closed_form() {
        let z = rat(2, 3);
        for p in 2..=12u64 {
            let c = rat_int(-1).pow(p as i32) * rat_int(2).pow(p as i32) * z.pow(p as i32)
                / Rational::from_integer(factorial(p) * factorial(p - 1));
            let logc = -&c / rat_int(4);
            let plain = &c * (harmonic(p) + harmonic(p - 1) - rat_int(1)) / rat_int(4);
            let got = coulomb_kp(p, &z, &rat_int(0));
            assert_eq!(
                got,
                vec![
                    FsTerm { coefficient: QuadExtNumber::rational(plain), log_r: false },
                    FsTerm { coefficient: QuadExtNumber::rational(logc), log_r: true },
                ],
                "p={p}"
            );
        }
    }

    #[test]
    fn kp_matches_pipeline() {
        let z = rat(5, 4);
        let k = rat(1, 3);
        let op = ConeOperator::coulomb(z.clone(), k.clone(), 8).unwrap();
        for p in 0..=8u64 {
            assert_eq!(coulomb_kp(p, &z, &k), spherical_limit(&op, p as usize).unwrap(), "p={p}");
        }
    }
}
