//! Words, patterns with variables, and substitutions over an integer alphabet.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

/// A symbol of the integer alphabet.
///
/// User input maps characters (or raw bytes in binary mode) to their code
/// points. The topmost codes are reserved and can never collide with input:
/// two separator symbols used by the hardness reduction and one internal
/// sentinel used when normalizing regular patterns.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    /// Internal sentinel prepended to both sides of a regular match.
    pub const SENTINEL: Symbol = Symbol(u32::MAX);
    /// Reserved separator written as `$` in instance files.
    pub const SEP_DOLLAR: Symbol = Symbol(u32::MAX - 1);
    /// Reserved separator written as `#` in instance files.
    pub const SEP_HASH: Symbol = Symbol(u32::MAX - 2);

    pub fn from_char(c: char) -> Symbol {
        Symbol(c as u32)
    }

    pub fn from_byte(b: u8) -> Symbol {
        Symbol(b as u32)
    }

    pub fn is_reserved(self) -> bool {
        self.0 > u32::MAX - 8
    }

    /// Printable form; reserved separators render as their file syntax.
    pub fn to_char(self) -> char {
        match self {
            Symbol::SEP_DOLLAR => '$',
            Symbol::SEP_HASH => '#',
            Symbol::SENTINEL => '\u{2038}',
            Symbol(c) => char::from_u32(c).unwrap_or('\u{FFFD}'),
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_char())
    }
}

/// A word: a sequence of symbols. Dereferences to `[Symbol]`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word {
    syms: Vec<Symbol>,
}

impl Word {
    pub fn new() -> Word {
        Word { syms: Vec::new() }
    }

    pub fn from_syms(syms: Vec<Symbol>) -> Word {
        Word { syms }
    }

    /// One symbol per character.
    pub fn from_text(text: &str) -> Word {
        Word {
            syms: text.chars().map(Symbol::from_char).collect(),
        }
    }

    /// One symbol per byte.
    pub fn from_bytes(bytes: &[u8]) -> Word {
        Word {
            syms: bytes.iter().copied().map(Symbol::from_byte).collect(),
        }
    }

    pub fn push(&mut self, s: Symbol) {
        self.syms.push(s);
    }

    pub fn extend_from(&mut self, other: &[Symbol]) {
        self.syms.extend_from_slice(other);
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.syms
    }

    pub fn to_text(&self) -> String {
        self.syms.iter().map(|s| s.to_char()).collect()
    }
}

impl Deref for Word {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.syms
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Word {
        Word::from_text(s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_text())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// One position of a pattern: a terminal symbol or a variable occurrence.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PatternItem {
    Terminal(Symbol),
    Var(usize),
}

/// Structural class of a pattern.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PatternClass {
    /// Every variable occurs exactly once.
    Regular,
    /// Exactly one distinct variable, occurring any number of times.
    Unary,
    /// Occurrence blocks of distinct variables do not interleave.
    NonCross,
    General,
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PatternClass::Regular => "Regular",
            PatternClass::Unary => "Unary",
            PatternClass::NonCross => "NonCross",
            PatternClass::General => "General",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty pattern")]
    Empty,
    #[error("unterminated variable reference starting at byte {0}")]
    UnterminatedVar(usize),
    #[error("empty variable name at byte {0}")]
    EmptyVarName(usize),
    #[error("dangling escape at byte {0}")]
    DanglingEscape(usize),
    #[error("invalid escape '\\{ch}' at byte {offset}")]
    InvalidEscape { offset: usize, ch: char },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern has no items")]
    Empty,
    #[error("variable ids must be dense in first-occurrence order (saw {0})")]
    NonDenseVar(usize),
    #[error("expected {expected} variable names, got {got}")]
    NameCount { expected: usize, got: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubstitutionError {
    #[error("no image for variable <{0}>")]
    MissingImage(String),
}

/// A pattern: a nonempty sequence of terminals and variable occurrences.
///
/// Variable ids are dense integers `0..var_count()` assigned in order of
/// first occurrence; the source-level names are kept only for reporting.
#[derive(Clone, PartialEq, Eq)]
pub struct Pattern {
    items: Vec<PatternItem>,
    var_names: Vec<String>,
    var_occurrences: Vec<usize>,
}

impl Pattern {
    /// Parses pattern text: literal characters are terminals, `<name>` is a
    /// variable occurrence, `\<` and `\\` escape the two special characters.
    pub fn parse(text: &str) -> Result<Pattern, ParseError> {
        let mut items = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let mut it = text.char_indices();
        while let Some((off, c)) = it.next() {
            match c {
                '\\' => match it.next() {
                    None => return Err(ParseError::DanglingEscape(off)),
                    Some((_, e @ ('<' | '\\'))) => {
                        items.push(PatternItem::Terminal(Symbol::from_char(e)))
                    }
                    Some((eo, e)) => return Err(ParseError::InvalidEscape { offset: eo, ch: e }),
                },
                '<' => {
                    let mut name = String::new();
                    loop {
                        match it.next() {
                            None => return Err(ParseError::UnterminatedVar(off)),
                            Some((_, '>')) => break,
                            Some((_, ch)) => name.push(ch),
                        }
                    }
                    if name.is_empty() {
                        return Err(ParseError::EmptyVarName(off));
                    }
                    let id = match names.iter().position(|n| *n == name) {
                        Some(id) => id,
                        None => {
                            names.push(name);
                            names.len() - 1
                        }
                    };
                    items.push(PatternItem::Var(id));
                }
                _ => items.push(PatternItem::Terminal(Symbol::from_char(c))),
            }
        }
        if items.is_empty() {
            return Err(ParseError::Empty);
        }
        Ok(Pattern::assemble(items, names))
    }

    /// Builds a pattern from items, naming variables `x0`, `x1`, ... unless a
    /// single variable is used, which is named `x`.
    pub fn from_items(items: Vec<PatternItem>) -> Result<Pattern, PatternError> {
        let vars = Self::check_items(&items)?;
        let names = if vars == 1 {
            vec!["x".to_string()]
        } else {
            (0..vars).map(|i| format!("x{i}")).collect()
        };
        Ok(Pattern::assemble(items, names))
    }

    pub fn from_items_named(
        items: Vec<PatternItem>,
        names: Vec<String>,
    ) -> Result<Pattern, PatternError> {
        let vars = Self::check_items(&items)?;
        if names.len() != vars {
            return Err(PatternError::NameCount {
                expected: vars,
                got: names.len(),
            });
        }
        Ok(Pattern::assemble(items, names))
    }

    fn check_items(items: &[PatternItem]) -> Result<usize, PatternError> {
        if items.is_empty() {
            return Err(PatternError::Empty);
        }
        let mut next = 0usize;
        for item in items {
            if let PatternItem::Var(x) = item {
                if *x > next {
                    return Err(PatternError::NonDenseVar(*x));
                }
                if *x == next {
                    next += 1;
                }
            }
        }
        Ok(next)
    }

    fn assemble(items: Vec<PatternItem>, var_names: Vec<String>) -> Pattern {
        let mut var_occurrences = vec![0usize; var_names.len()];
        for item in &items {
            if let PatternItem::Var(x) = item {
                var_occurrences[*x] += 1;
            }
        }
        Pattern {
            items,
            var_names,
            var_occurrences,
        }
    }

    pub fn items(&self) -> &[PatternItem] {
        &self.items
    }

    /// Pattern length `m` counting every terminal and variable occurrence.
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn var_count(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_name(&self, x: usize) -> &str {
        &self.var_names[x]
    }

    pub fn occurrences(&self, x: usize) -> usize {
        self.var_occurrences[x]
    }

    /// Total number of variable occurrences.
    pub fn total_occurrences(&self) -> usize {
        self.var_occurrences.iter().sum()
    }

    /// Largest occurrence count of any single variable.
    pub fn max_occurrences(&self) -> usize {
        self.var_occurrences.iter().copied().max().unwrap_or(0)
    }

    pub fn classify(&self) -> PatternClass {
        if self.var_occurrences.iter().all(|&c| c == 1) {
            return PatternClass::Regular;
        }
        if self.var_names.len() == 1 {
            return PatternClass::Unary;
        }
        // Non-cross: the variable occurrence sequence, with consecutive
        // repeats collapsed, never revisits a variable.
        let mut seen = vec![false; self.var_names.len()];
        let mut last = usize::MAX;
        for item in &self.items {
            if let PatternItem::Var(x) = item {
                if *x != last {
                    if seen[*x] {
                        return PatternClass::General;
                    }
                    seen[*x] = true;
                    last = *x;
                }
            }
        }
        PatternClass::NonCross
    }

    /// Projection onto the terminal alphabet: all terminals, in order.
    pub fn term_projection(&self) -> Word {
        let syms = self
            .items
            .iter()
            .filter_map(|it| match it {
                PatternItem::Terminal(s) => Some(*s),
                PatternItem::Var(_) => None,
            })
            .collect();
        Word::from_syms(syms)
    }

    /// Replaces every variable occurrence by its image under `h`.
    pub fn apply(&self, h: &Substitution) -> Result<Word, SubstitutionError> {
        let mut out = Word::new();
        for item in &self.items {
            match item {
                PatternItem::Terminal(s) => out.push(*s),
                PatternItem::Var(x) => {
                    let image = h
                        .get(*x)
                        .ok_or_else(|| SubstitutionError::MissingImage(self.var_name(*x).into()))?;
                    out.extend_from(image);
                }
            }
        }
        Ok(out)
    }

    /// Source form of the pattern; parsing it back yields an equal pattern.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            match item {
                PatternItem::Terminal(s) => {
                    let c = s.to_char();
                    if c == '<' || c == '\\' {
                        out.push('\\');
                    }
                    out.push(c);
                }
                PatternItem::Var(x) => {
                    out.push('<');
                    out.push_str(&self.var_names[*x]);
                    out.push('>');
                }
            }
        }
        out
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_text())
    }
}

/// A substitution: a partial map from variable ids to words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    images: BTreeMap<usize, Word>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn insert(&mut self, var: usize, image: Word) {
        self.images.insert(var, image);
    }

    pub fn get(&self, var: usize) -> Option<&Word> {
        self.images.get(&var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Word)> {
        self.images.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Substitution mapping every variable of `p` to the empty word.
    pub fn all_empty(p: &Pattern) -> Substitution {
        let mut h = Substitution::new();
        for x in 0..p.var_count() {
            h.insert(x, Word::new());
        }
        h
    }
}
