//! Coordinate charts.
//!
//! A [`Chart`] is an ordered list of distinct coordinate names. Every scalar,
//! form and multivector in the engine is expressed relative to exactly one
//! chart, and the coordinate order is fixed for the lifetime of a
//! computation: it determines the monomial order, the index tuples of sparse
//! tensors and the canonical rendering of every expression.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug)]
struct ChartData {
    coords: Vec<String>,
}

/// An ordered coordinate chart. Cheap to clone; equality compares the
/// coordinate names, not the allocation.
#[derive(Debug, Clone)]
pub struct Chart {
    data: Arc<ChartData>,
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data.coords == other.data.coords
    }
}

impl Eq for Chart {}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Chart {
    /// Builds a chart from coordinate names. Names must be distinct,
    /// nonempty identifiers (letters, digits, underscores, not starting
    /// with a digit).
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(coords: I) -> Result<Self> {
        let coords: Vec<String> = coords.into_iter().map(Into::into).collect();
        if coords.is_empty() {
            return Err(Error::InvalidProblem("chart needs at least one coordinate".into()));
        }
        for (i, name) in coords.iter().enumerate() {
            if !valid_name(name) {
                return Err(Error::InvalidProblem(format!("invalid coordinate name `{name}`")));
            }
            if coords[..i].contains(name) {
                return Err(Error::InvalidProblem(format!("duplicate coordinate name `{name}`")));
            }
        }
        Ok(Chart { data: Arc::new(ChartData { coords }) })
    }

    pub fn dim(&self) -> usize {
        self.data.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.data.coords
    }

    pub fn name(&self, index: usize) -> &str {
        &self.data.coords[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.data
            .coords
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))
    }

    /// The coordinate function with the given name, as a scalar.
    pub fn var(&self, name: &str) -> Result<Scalar> {
        Ok(Scalar::var(self.dim(), self.index_of(name)?))
    }

    /// Parses an expression in this chart's coordinates.
    pub fn parse(&self, input: &str) -> Result<Scalar> {
        crate::scalar::parse::parse_expression(self, input)
    }

    /// A new chart with one extra coordinate appended at the end.
    pub fn extended(&self, name: &str) -> Result<Chart> {
        let mut coords = self.data.coords.clone();
        coords.push(name.to_string());
        Chart::new(coords)
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.data.coords.join(", "))
    }
}
