//! Words in the free group on `a`, `b`; prefix-free word families; the
//! products `theta_n = omega_1 tau_1 ... omega_n tau_n`; and the bounded
//! verifier showing that the blocks `omega_n tau_n` generate freely.
//!
//! Letters print as `a`, `b` and their inverses as `A`, `B`. The empty word
//! prints as `e`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::par;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("index {index} is outside 1..={max}")]
    BadIndex { index: usize, max: usize },
    #[error("symbol word is not reduced: {0}")]
    NotReduced(String),
    #[error("word family is not prefix-free: {first} is an initial segment of {second}")]
    PrefixFreeViolated { first: String, second: String },
    #[error("cannot parse word {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Generator {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub const A: Letter = Letter {
        generator: Generator::A,
        inverse: false,
    };
    pub const B: Letter = Letter {
        generator: Generator::B,
        inverse: false,
    };
    pub const A_INV: Letter = Letter {
        generator: Generator::A,
        inverse: true,
    };
    pub const B_INV: Letter = Letter {
        generator: Generator::B,
        inverse: true,
    };
    pub const ALL: [Letter; 4] = [Letter::A, Letter::A_INV, Letter::B, Letter::B_INV];

    pub fn positive(generator: Generator) -> Self {
        Letter {
            generator,
            inverse: false,
        }
    }

    pub fn inv(self) -> Self {
        Letter {
            inverse: !self.inverse,
            ..self
        }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match (self.generator, self.inverse) {
            (Generator::A, false) => 'a',
            (Generator::A, true) => 'A',
            (Generator::B, false) => 'b',
            (Generator::B, true) => 'B',
        };
        write!(f, "{c}")
    }
}

/// A finite sequence of letters, not necessarily reduced.
///
/// Ordered by length, then lexicographically with `a < A < b < B`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Word {
        Word {
            letters: self.letters.repeat(k),
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.letters.starts_with(&self.letters)
    }

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Accepts `a b A B`, `a^-1`, `a⁻¹` and `e`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| WordError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "e" || compact.is_empty() {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        let mut rest = compact.as_str();
        while let Some(c) = rest.chars().next() {
            let mut letter = match c {
                'a' => Letter::A,
                'b' => Letter::B,
                'A' => Letter::A_INV,
                'B' => Letter::B_INV,
                _ => return Err(err("unexpected character")),
            };
            rest = &rest[c.len_utf8()..];
            for suffix in ["^-1", "⁻¹"] {
                if let Some(r) = rest.strip_prefix(suffix) {
                    letter = letter.inv();
                    rest = r;
                    break;
                }
            }
            letters.push(letter);
        }
        Ok(Word { letters })
    }
}

/// Free reduction by a single left-to-right stack pass.
pub fn reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.letters {
        match out.last() {
            Some(&top) if top.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word { letters: out }
}

pub fn reverse(w: &Word) -> Word {
    Word {
        letters: w.letters.iter().rev().copied().collect(),
    }
}

/// All reduced words of length at most `max_len`, identity first, ordered by
/// length then lexicographically.
pub fn enumerate_reduced_words(max_len: usize) -> Vec<Word> {
    let mut all = vec![Word::identity()];
    let mut layer = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * 3 + 4);
        for w in &layer {
            for l in Letter::ALL {
                if w.last().is_some_and(|t| t.cancels(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// How `omega_n` is built from `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyRule {
    /// `power^n tail`; the standard family is `b^n a`.
    PowerThen { power: Generator, tail: Generator },
    /// `power^n`.
    Power(Generator),
    /// `omega_n` is the `n`-th listed word.
    Explicit(Vec<Word>),
}

impl fmt::Display for FamilyRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |g: &Generator| Letter::positive(*g).to_string();
        match self {
            FamilyRule::PowerThen { power, tail } => {
                write!(f, "{}^n {}", name(power), name(tail))
            }
            FamilyRule::Power(g) => write!(f, "{}^n", name(g)),
            FamilyRule::Explicit(ws) => {
                let parts: Vec<String> = ws.iter().map(Word::to_string).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

/// The indexed family `omega_1, ..., omega_max_index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordFamily {
    pub rule: FamilyRule,
    pub max_index: usize,
}

impl WordFamily {
    pub fn new(rule: FamilyRule, max_index: usize) -> Self {
        WordFamily { rule, max_index }
    }

    /// `omega_n = b^n a`.
    pub fn standard(max_index: usize) -> Self {
        WordFamily::new(
            FamilyRule::PowerThen {
                power: Generator::B,
                tail: Generator::A,
            },
            max_index,
        )
    }

    fn check_index(&self, n: usize) -> Result<(), WordError> {
        let max = match &self.rule {
            FamilyRule::Explicit(ws) => self.max_index.min(ws.len()),
            _ => self.max_index,
        };
        if n == 0 || n > max {
            return Err(WordError::BadIndex { index: n, max });
        }
        Ok(())
    }

    pub fn omega(&self, n: usize) -> Result<Word, WordError> {
        self.check_index(n)?;
        Ok(match &self.rule {
            FamilyRule::PowerThen { power, tail } => {
                let mut letters = vec![Letter::positive(*power); n];
                letters.push(Letter::positive(*tail));
                Word { letters }
            }
            FamilyRule::Power(g) => Word {
                letters: vec![Letter::positive(*g); n],
            },
            FamilyRule::Explicit(ws) => ws[n - 1].clone(),
        })
    }

    pub fn tau(&self, n: usize) -> Result<Word, WordError> {
        self.omega(n).map(|w| reverse(&w))
    }

    /// The block `omega_n tau_n` substituted for the symbol `S_n`.
    pub fn block(&self, n: usize) -> Result<Word, WordError> {
        Ok(reduce(&self.omega(n)?.concat(&self.tau(n)?)))
    }
}

/// `omega_n = b^n a` from the standard family.
pub fn omega(n: usize) -> Result<Word, WordError> {
    WordFamily::standard(n.max(1)).omega(n)
}

/// `theta_n = omega_1 tau_1 ... omega_n tau_n`, freely reduced.
pub fn theta(n: usize, fam: &WordFamily) -> Result<Word, WordError> {
    fam.check_index(n)?;
    let mut w = Word::identity();
    for k in 1..=n {
        w = w.concat(&fam.omega(k)?).concat(&fam.tau(k)?);
    }
    Ok(reduce(&w))
}

/// Checks every ordered pair of distinct indices up to `max_index`.
pub fn prefix_violation(fam: &WordFamily) -> Option<(Word, Word)> {
    let words: Vec<Word> = (1..=fam.max_index)
        .map_while(|n| fam.omega(n).ok())
        .map(|w| reduce(&w))
        .collect();
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            if i != j && u.is_prefix_of(v) {
                return Some((u.clone(), v.clone()));
            }
        }
    }
    None
}

pub fn is_prefix_free(fam: &WordFamily) -> bool {
    prefix_violation(fam).is_none()
}

/// `S_index` or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub index: usize,
    pub inverse: bool,
}

impl Syllable {
    pub fn new(index: usize, exponent: i8) -> Self {
        assert!(exponent == 1 || exponent == -1, "exponent must be +-1");
        Syllable {
            index,
            inverse: exponent < 0,
        }
    }

    pub fn exponent(&self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn cancels(self, other: Syllable) -> bool {
        self.index == other.index && self.inverse != other.inverse
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "S{}^-1", self.index)
        } else {
            write!(f, "S{}", self.index)
        }
    }
}

/// A product of symbols `S_n^{+-1}` before substitution.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SymbolWord {
    syllables: Vec<Syllable>,
}

impl Ord for SymbolWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.syllables
            .len()
            .cmp(&other.syllables.len())
            .then_with(|| self.syllables.cmp(&other.syllables))
    }
}

impl PartialOrd for SymbolWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SymbolWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.syllables.iter().map(Syllable::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl SymbolWord {
    pub fn new(syllables: Vec<Syllable>) -> Self {
        SymbolWord { syllables }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.syllables.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn concat(&self, other: &SymbolWord) -> SymbolWord {
        let mut syllables = self.syllables.clone();
        syllables.extend_from_slice(&other.syllables);
        SymbolWord { syllables }
    }
}

/// All nonempty reduced symbol words over `S_1..S_max_index` with at most
/// `max_syllables` syllables, ordered by length then lexicographically.
pub fn enumerate_symbol_words(max_index: usize, max_syllables: usize) -> Vec<SymbolWord> {
    let alphabet: Vec<Syllable> = (1..=max_index)
        .flat_map(|n| [Syllable::new(n, 1), Syllable::new(n, -1)])
        .collect();
    let mut all = Vec::new();
    let mut layer = vec![SymbolWord::default()];
    for _ in 0..max_syllables {
        let mut next = Vec::new();
        for w in &layer {
            for &s in &alphabet {
                if w.syllables.last().is_some_and(|t| t.cancels(s)) {
                    continue;
                }
                let mut v = w.clone();
                v.syllables.push(s);
                next.push(v);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// Substitutes `S_n -> omega_n tau_n` and freely reduces.
pub fn expand(sw: &SymbolWord, fam: &WordFamily) -> Result<Word, WordError> {
    if !sw.is_reduced() {
        return Err(WordError::NotReduced(sw.to_string()));
    }
    let mut w = Word::identity();
    for s in &sw.syllables {
        let block = fam.block(s.index)?;
        w = w.concat(&if s.inverse { block.inverse() } else { block });
    }
    Ok(reduce(&w))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub symbol_word: String,
    pub reason: String,
}

/// Outcome of the bounded free-generation check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeGenerationReport {
    pub scope: &'static str,
    pub family: String,
    pub max_index: usize,
    pub max_syllables: usize,
    pub symbol_words_checked: usize,
    pub pair_reductions_checked: usize,
    pub shortest_expansion: usize,
    pub counterexample: Option<Counterexample>,
}

impl FreeGenerationReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub const BOUNDED_SCOPE: &str = "bounded verification";

struct WordCheck {
    pairs: usize,
    expanded_len: usize,
}

/// Splits `S_{n_1}^{e_1} ... S_{n_m}^{e_m}` into the pieces `omega^{+-1}`,
/// `tau^{+-1}`, keeps the first and last pieces alone and pairs the rest
/// across syllable boundaries. Each pair must keep its outermost letters after
/// reduction, no cancellation may happen between blocks, and the result must
/// agree with the direct expansion.
fn check_symbol_word(sw: &SymbolWord, fam: &WordFamily) -> Result<WordCheck, String> {
    let mut pieces = Vec::with_capacity(2 * sw.len());
    for s in sw.syllables() {
        let (o, t) = (fam.omega(s.index), fam.tau(s.index));
        let (o, t) = (o.map_err(|e| e.to_string())?, t.map_err(|e| e.to_string())?);
        if s.inverse {
            pieces.push(reduce(&t).inverse());
            pieces.push(reduce(&o).inverse());
        } else {
            pieces.push(reduce(&o));
            pieces.push(reduce(&t));
        }
    }
    let last = pieces.len() - 1;
    let mut blocks = vec![pieces[0].clone()];
    let mut pairs = 0;
    for (k, pair) in pieces[1..last].chunks(2).enumerate() {
        let joined = pair[0].concat(&pair[1]);
        let reduced = reduce(&joined);
        pairs += 1;
        if reduced.is_empty()
            || reduced.first() != joined.first()
            || reduced.last() != joined.last()
        {
            return Err(format!(
                "pair {} ({} | {}) reduces to {} and loses an outer letter",
                k + 1,
                pair[0],
                pair[1],
                reduced
            ));
        }
        blocks.push(reduced);
    }
    blocks.push(pieces[last].clone());

    for (k, w) in blocks.windows(2).enumerate() {
        if let (Some(l), Some(f)) = (w[0].last(), w[1].first()) {
            if l.cancels(f) {
                return Err(format!("cancellation between blocks {} and {}", k, k + 1));
            }
        }
    }
    let assembled = blocks.iter().fold(Word::identity(), |acc, b| acc.concat(b));
    let direct = expand(sw, fam).map_err(|e| e.to_string())?;
    if assembled != direct {
        return Err(format!(
            "blockwise reduction {assembled} disagrees with direct reduction {direct}"
        ));
    }
    if direct.is_empty() {
        return Err("expands to the identity".to_string());
    }
    Ok(WordCheck {
        pairs,
        expanded_len: direct.len(),
    })
}

/// Exhaustively checks that no nonempty reduced symbol word with at most
/// `max_syllables` syllables over `S_1..S_max_index` expands to the identity,
/// and that every adjacent-pair reduction keeps its outer letters.
pub fn verify_free_generation(
    fam: &WordFamily,
    max_syllables: usize,
) -> Result<FreeGenerationReport, WordError> {
    if let Some((first, second)) = prefix_violation(fam) {
        return Err(WordError::PrefixFreeViolated {
            first: first.to_string(),
            second: second.to_string(),
        });
    }
    let words = enumerate_symbol_words(fam.max_index, max_syllables);
    let results = par::map(&words, |sw| check_symbol_word(sw, fam));

    let mut report = FreeGenerationReport {
        scope: BOUNDED_SCOPE,
        family: fam.rule.to_string(),
        max_index: fam.max_index,
        max_syllables,
        symbol_words_checked: 0,
        pair_reductions_checked: 0,
        shortest_expansion: usize::MAX,
        counterexample: None,
    };
    for (sw, r) in words.iter().zip(results) {
        report.symbol_words_checked += 1;
        match r {
            Ok(c) => {
                report.pair_reductions_checked += c.pairs;
                report.shortest_expansion = report.shortest_expansion.min(c.expanded_len);
            }
            Err(reason) => {
                report.counterexample = Some(Counterexample {
                    symbol_word: sw.to_string(),
                    reason,
                });
                break;
            }
        }
    }
    if report.shortest_expansion == usize::MAX {
        report.shortest_expansion = 0;
    }
    Ok(report)
}
