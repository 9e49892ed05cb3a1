//! JSON documents for chains, leaf functions and leaf stacks.
//!
//! ```text
//! chain:      {"grid": G, "dim": m, "cells": [{"anchor": [..], "axes": [..], "coeff": k}, ..]}
//! leaf:       {"grid": G, "values": [[x_0, .., x_{n-1}, h], ..]}
//! leaf stack: {"grid": G, "N": N, "leaves": [[[x_0, .., h], ..], ..]}
//! grid G:     {"n": n, "extents": [..], "y_range": [min, max]}
//! ```
//!
//! Encoding is canonical: cells in `(anchor, axes)` order and rows in column
//! order, so equal values always encode to identical bytes.

use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::cubical::{Cell, Chain, ChainError, Column, GridError, GridSpec};
use crate::decompose::{DecomposeError, LeafStack};
use crate::graph::{GraphError, GridFunction};

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation at {path}: {reason}")]
    Schema { path: String, reason: String },
    #[error("invalid grid: {0}")]
    Grid(#[from] GridError),
    #[error("cell {index} is malformed: {reason}")]
    MalformedCell { index: usize, reason: String },
    #[error("cell {index} has a non-integer coefficient")]
    NonIntegerCoefficient { index: usize },
    #[error("cell {index} lies outside the grid")]
    OutOfGrid { index: usize },
    #[error("coefficient overflow")]
    Overflow,
    #[error("column {0} has no value")]
    MissingColumn(Column),
    #[error("column {0} is listed twice")]
    DuplicateColumn(Column),
    #[error("declared N = {declared} but {found} leaves are listed")]
    CountMismatch { declared: i64, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Stack(#[from] DecomposeError),
}

fn schema(path: impl Into<String>, reason: impl Into<String>) -> CodecError {
    CodecError::Schema {
        path: path.into(),
        reason: reason.into(),
    }
}

#[derive(Serialize)]
struct GridDoc<'a> {
    n: usize,
    extents: &'a [i64],
    y_range: [i64; 2],
}

impl<'a> From<&'a GridSpec> for GridDoc<'a> {
    fn from(g: &'a GridSpec) -> Self {
        Self {
            n: g.n(),
            extents: g.extents(),
            y_range: [g.y_min(), g.y_max()],
        }
    }
}

#[derive(Serialize)]
struct CellDoc<'a> {
    anchor: &'a [i64],
    axes: &'a [usize],
    coeff: i64,
}

#[derive(Serialize)]
struct ChainDoc<'a> {
    grid: GridDoc<'a>,
    dim: usize,
    cells: Vec<CellDoc<'a>>,
}

#[derive(Serialize)]
struct LeafDoc<'a> {
    grid: GridDoc<'a>,
    values: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct StackDoc<'a> {
    grid: GridDoc<'a>,
    #[serde(rename = "N")]
    count: usize,
    leaves: Vec<Vec<Vec<i64>>>,
}

fn rows(u: &GridFunction) -> Vec<Vec<i64>> {
    u.iter()
        .map(|(c, h)| c.coords().iter().copied().chain([h]).collect())
        .collect()
}

pub fn encode_chain(chain: &Chain) -> String {
    let doc = ChainDoc {
        grid: chain.grid().into(),
        dim: chain.dim(),
        cells: chain
            .iter()
            .map(|(c, k)| CellDoc {
                anchor: c.anchor(),
                axes: c.axes(),
                coeff: k,
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn encode_grid_function(u: &GridFunction) -> String {
    let doc = LeafDoc {
        grid: u.grid().into(),
        values: rows(u),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn encode_leaf_stack(stack: &LeafStack) -> String {
    let doc = StackDoc {
        grid: stack.grid().into(),
        count: stack.len(),
        leaves: stack.leaves().iter().map(rows).collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CodecError> {
    v.as_object()
        .ok_or_else(|| schema(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, CodecError> {
    obj.get(key)
        .ok_or_else(|| schema(path, format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a [Value], CodecError> {
    v.as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| schema(path, "expected an array"))
}

fn integer(v: &Value, path: &str) -> Result<i64, CodecError> {
    v.as_i64()
        .ok_or_else(|| schema(path, "expected an integer"))
}

fn integers(v: &Value, path: &str) -> Result<Vec<i64>, CodecError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| integer(x, &format!("{path}[{i}]")))
        .collect()
}

fn decode_grid(v: &Value) -> Result<GridSpec, CodecError> {
    let obj = object(v, "grid")?;
    let n = integer(field(obj, "n", "grid")?, "grid.n")?;
    let n = usize::try_from(n).map_err(|_| schema("grid.n", "must be positive"))?;
    let extents = integers(field(obj, "extents", "grid")?, "grid.extents")?;
    let range = integers(field(obj, "y_range", "grid")?, "grid.y_range")?;
    let [min, max] = range[..] else {
        return Err(schema("grid.y_range", "expected [min, max]"));
    };
    Ok(GridSpec::new(n, extents, (min, max))?)
}

fn parse(text: &str) -> Result<Value, CodecError> {
    Ok(serde_json::from_str(text)?)
}

pub fn decode_chain(text: &str) -> Result<Chain, CodecError> {
    let doc = parse(text)?;
    let obj = object(&doc, "$")?;
    let grid = decode_grid(field(obj, "grid", "$")?)?;
    let dim = integer(field(obj, "dim", "$")?, "dim")?;
    let dim = usize::try_from(dim).map_err(|_| schema("dim", "must be nonnegative"))?;
    let mut chain = Chain::zero(grid.clone(), dim).map_err(|e| schema("dim", e.to_string()))?;
    for (index, cell) in array(field(obj, "cells", "$")?, "cells")?
        .iter()
        .enumerate()
    {
        let path = format!("cells[{index}]");
        let cobj = object(cell, &path)?;
        let malformed = |reason: String| CodecError::MalformedCell { index, reason };
        let anchor = integers(field(cobj, "anchor", &path)?, &format!("{path}.anchor"))
            .map_err(|e| malformed(e.to_string()))?;
        let axes = integers(field(cobj, "axes", &path)?, &format!("{path}.axes"))
            .map_err(|e| malformed(e.to_string()))?
            .into_iter()
            .map(usize::try_from)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| malformed("negative axis index".into()))?;
        if axes.len() != dim {
            return Err(malformed(format!("{} axes in a {dim}-chain", axes.len())));
        }
        let coeff = field(cobj, "coeff", &path)?
            .as_i64()
            .ok_or(CodecError::NonIntegerCoefficient { index })?;
        let cell = Cell::new(&grid, &anchor, &axes).map_err(|e| match e {
            ChainError::OutOfGrid { .. } => CodecError::OutOfGrid { index },
            other => malformed(other.to_string()),
        })?;
        chain.add_term(cell, coeff).map_err(|e| match e {
            ChainError::Overflow => CodecError::Overflow,
            other => malformed(other.to_string()),
        })?;
    }
    Ok(chain)
}

fn decode_rows(grid: &GridSpec, v: &Value, path: &str) -> Result<GridFunction, CodecError> {
    let mut values: Vec<Option<i64>> = vec![None; grid.column_count()];
    for (i, row) in array(v, path)?.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let row = integers(row, &row_path)?;
        let Some((&h, coords)) = row.split_last() else {
            return Err(schema(row_path, "empty row"));
        };
        let column = grid
            .column(coords)
            .filter(|c| c.coords() == coords)
            .ok_or_else(|| schema(&row_path, format!("{coords:?} is not a column")))?;
        let slot = &mut values[grid.column_index(&column)];
        if slot.replace(h).is_some() {
            return Err(CodecError::DuplicateColumn(column));
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| CodecError::MissingColumn(grid.column_at(i))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GridFunction::new(grid.clone(), values)?)
}

pub fn decode_grid_function(text: &str) -> Result<GridFunction, CodecError> {
    let doc = parse(text)?;
    let obj = object(&doc, "$")?;
    let grid = decode_grid(field(obj, "grid", "$")?)?;
    decode_rows(&grid, field(obj, "values", "$")?, "values")
}

pub fn decode_leaf_stack(text: &str) -> Result<LeafStack, CodecError> {
    let doc = parse(text)?;
    let obj = object(&doc, "$")?;
    let grid = decode_grid(field(obj, "grid", "$")?)?;
    let declared = integer(field(obj, "N", "$")?, "N")?;
    let leaves = array(field(obj, "leaves", "$")?, "leaves")?
        .iter()
        .enumerate()
        .map(|(j, rows)| decode_rows(&grid, rows, &format!("leaves[{j}]")))
        .collect::<Result<Vec<_>, _>>()?;
    if declared != leaves.len() as i64 {
        return Err(CodecError::CountMismatch {
            declared,
            found: leaves.len(),
        });
    }
    Ok(LeafStack::new(grid, leaves)?)
}
