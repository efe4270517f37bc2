//! Generator for the reduction from median-string instances to unary-pattern
//! matching, plus the separator-gadget distance identity it relies on. The
//! generated instances serve as structured fixtures and benchmark stressors.

use thiserror::Error;

use crate::edit::edit_distance;
use crate::pattern::{Pattern, PatternItem, Substitution, Symbol, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("reduction needs at least one input string")]
    NoStrings,
    #[error("input strings must be binary over '0' and '1'")]
    NotBinary,
    #[error("the budget {delta} exceeds the total input length {total}")]
    DeltaTooLarge { delta: usize, total: usize },
    #[error("gadget hypothesis violated: {0}")]
    GadgetHypothesis(&'static str),
}

/// Parameters of the reduction: binary strings, a budget, and optionally a
/// shrunken separator scale for structural smoke tests.
#[derive(Debug, Clone)]
pub struct ReductionParams {
    strings: Vec<Word>,
    delta: usize,
    s_override: Option<usize>,
}

impl ReductionParams {
    pub fn new(strings: Vec<Word>, delta: usize) -> Result<ReductionParams, ReductionError> {
        if strings.is_empty() {
            return Err(ReductionError::NoStrings);
        }
        let zero = Symbol::from_char('0');
        let one = Symbol::from_char('1');
        if strings
            .iter()
            .any(|w| w.iter().any(|&s| s != zero && s != one))
        {
            return Err(ReductionError::NotBinary);
        }
        let total: usize = strings.iter().map(|w| w.len()).sum();
        if delta > total {
            return Err(ReductionError::DeltaTooLarge { delta, total });
        }
        Ok(ReductionParams {
            strings,
            delta,
            s_override: None,
        })
    }

    /// Shrinks the separator scale. The guarantee tied to the default scale
    /// is void; the generated instance is flagged `structural_only`.
    pub fn with_s_override(mut self, s: usize) -> ReductionParams {
        self.s_override = Some(s);
        self
    }

    pub fn strings(&self) -> &[Word] {
        &self.strings
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Separator scale: six times the total input length unless overridden.
    pub fn sep_scale(&self) -> usize {
        self.s_override
            .unwrap_or_else(|| 6 * self.strings.iter().map(|w| w.len()).sum::<usize>())
    }
}

/// A generated unary-pattern instance: `pattern` has one variable occurring
/// `k` times, `word` carries the payload strings between separator blocks.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub pattern: Pattern,
    pub word: Word,
    pub delta: usize,
    pub sep_scale: usize,
    /// True when the separator scale was overridden; such instances exercise
    /// the shape of the reduction only, not its guarantee.
    pub structural_only: bool,
}

// ($^s #^s)^s
fn separator_block(s: usize) -> Vec<Symbol> {
    let mut block = Vec::with_capacity(2 * s * s);
    for _ in 0..s {
        block.extend(std::iter::repeat_n(Symbol::SEP_DOLLAR, s));
        block.extend(std::iter::repeat_n(Symbol::SEP_HASH, s));
    }
    block
}

/// Instantiates the reduction template:
/// pattern `(x·($^S#^S)^S)^k`, word `w_1·($^S#^S)^S · … · w_k·($^S#^S)^S`.
pub fn gen_instance(params: &ReductionParams) -> Result<ReductionInstance, ReductionError> {
    let s = params.sep_scale();
    let block = separator_block(s);
    let mut items = Vec::new();
    let mut word = Word::new();
    for payload in &params.strings {
        items.push(PatternItem::Var(0));
        items.extend(block.iter().map(|&sym| PatternItem::Terminal(sym)));
        word.extend_from(payload);
        word.extend_from(&block);
    }
    let pattern =
        Pattern::from_items(items).expect("reduction pattern is nonempty with one variable");
    Ok(ReductionInstance {
        pattern,
        word,
        delta: params.delta,
        sep_scale: s,
        structural_only: params.s_override.is_some(),
    })
}

/// Which end of the gadget carries the surplus run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetForm {
    /// `$^g ($^S#^S)^{S-1} $^S #^l` against `($^S#^S)^S`
    SurplusFront,
    /// `$^l #^S ($^S#^S)^{S-1} #^g` against `($^S#^S)^S`
    SurplusBack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetCheck {
    pub dp_value: usize,
    pub formula_value: usize,
    pub agree: bool,
}

/// Distance between the perturbed separator gadget and the clean block,
/// checked against the closed form `g + (S - l)`.
///
/// Hypotheses: `2g <= S`, `S <= 2(l - g)`, `l <= S`; violations are errors.
pub fn gadget_check(s: usize, g: usize, l: usize, form: GadgetForm) -> Result<GadgetCheck, ReductionError> {
    if 2 * g > s {
        return Err(ReductionError::GadgetHypothesis("2g <= S"));
    }
    if l < g || 2 * (l - g) < s {
        return Err(ReductionError::GadgetHypothesis("S/2 <= l - g"));
    }
    if l > s {
        return Err(ReductionError::GadgetHypothesis("l <= S"));
    }
    let dollar = Symbol::SEP_DOLLAR;
    let hash = Symbol::SEP_HASH;
    let run = |sym: Symbol, count: usize| std::iter::repeat_n(sym, count);

    let mut perturbed: Vec<Symbol> = Vec::new();
    match form {
        GadgetForm::SurplusFront => {
            perturbed.extend(run(dollar, g));
            for _ in 0..s.saturating_sub(1) {
                perturbed.extend(run(dollar, s));
                perturbed.extend(run(hash, s));
            }
            perturbed.extend(run(dollar, s));
            perturbed.extend(run(hash, l));
        }
        GadgetForm::SurplusBack => {
            perturbed.extend(run(dollar, l));
            perturbed.extend(run(hash, s));
            for _ in 0..s.saturating_sub(1) {
                perturbed.extend(run(dollar, s));
                perturbed.extend(run(hash, s));
            }
            perturbed.extend(run(hash, g));
        }
    }
    let clean = separator_block(s);
    let dp_value = edit_distance(&perturbed, &clean);
    let formula_value = g + (s - l);
    Ok(GadgetCheck {
        dp_value,
        formula_value,
        agree: dp_value == formula_value,
    })
}

/// True iff substituting `s` for the variable brings the pattern within the
/// instance's budget.
pub fn forward_check(inst: &ReductionInstance, s: &Word) -> bool {
    let mut h = Substitution::new();
    h.insert(0, s.clone());
    let image = inst
        .pattern
        .apply(&h)
        .expect("the reduction pattern has exactly one variable");
    edit_distance(&image, &inst.word) <= inst.delta
}
