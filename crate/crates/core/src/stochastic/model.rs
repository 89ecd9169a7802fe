use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::instances::{ElemSet, ValuationSet};
use crate::rational::{self, Rational};

/// One stochastic element: an explicit distribution over domain points and a
/// deterministic processing length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StochElement {
    /// `(domain point, probability)`, sorted by point, probabilities positive.
    pub outcomes: Vec<(usize, Rational)>,
    pub length: u64,
}

impl StochElement {
    pub fn new(mut outcomes: Vec<(usize, Rational)>, length: u64) -> Result<Self> {
        outcomes.sort_by_key(|&(b, _)| b);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(outcomes.len());
        for (b, p) in outcomes {
            match merged.last_mut() {
                Some((last, q)) if *last == b => *q += p,
                _ => merged.push((b, p)),
            }
        }
        merged.retain(|(_, p)| !p.is_zero());
        if merged.iter().any(|(_, p)| *p < Rational::zero()) {
            return Err(Error::invalid("negative outcome probability"));
        }
        let total: Rational = merged.iter().map(|(_, p)| *p).sum();
        if total != Rational::one() {
            return Err(Error::invalid(format!(
                "outcome probabilities sum to {}",
                rational::fmt(&total)
            )));
        }
        if length == 0 {
            return Err(Error::invalid("element length must be positive"));
        }
        Ok(StochElement {
            outcomes: merged,
            length,
        })
    }

    /// Point mass on `b`.
    pub fn point(b: usize, length: u64) -> Self {
        StochElement {
            outcomes: vec![(b, Rational::one())],
            length,
        }
    }

    pub fn support(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_deterministic(&self) -> bool {
        self.outcomes.len() == 1
    }
}

/// Independent stochastic elements plus valuations on their shared domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StochasticInstance {
    elements: Vec<StochElement>,
    valuations: ValuationSet,
}

impl StochasticInstance {
    pub fn new(elements: Vec<StochElement>, valuations: ValuationSet) -> Result<Self> {
        if elements.len() > 64 {
            return Err(Error::invalid("at most 64 stochastic elements are supported"));
        }
        for (j, el) in elements.iter().enumerate() {
            if let Some((b, _)) = el.outcomes.iter().find(|(b, _)| *b >= valuations.domain()) {
                return Err(Error::invalid(format!(
                    "element {j} realizes point {b} outside domain of size {}",
                    valuations.domain()
                )));
            }
        }
        Ok(StochasticInstance {
            elements,
            valuations,
        })
    }

    pub fn elements(&self) -> &[StochElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn valuations(&self) -> &ValuationSet {
        &self.valuations
    }

    pub fn length(&self, e: usize) -> u64 {
        self.elements[e].length
    }

    /// Cover time assigned to functions that are never covered.
    pub fn total_length(&self) -> u64 {
        self.elements.iter().map(|e| e.length).sum()
    }

    pub fn all_elements(&self) -> ElemSet {
        ElemSet::full(self.len())
    }
}
