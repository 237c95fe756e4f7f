//! Turning command-line strings into engine values. Every parser reports where in the
//! input it gave up.

use std::path::Path;

use caplab_core::oracle::FiniteModule;
use caplab_core::{parse_module, Budget, Error, FGModule, IntMatrix, Result, RingDescriptor};

/// Inline text or JSON is used as is; anything else is read as a file path.
fn inline_or_file(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') || t.starts_with("Z:") || t.starts_with("Z/") {
        return Ok(arg.to_string());
    }
    let path = Path::new(arg);
    if path.exists() {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))
    } else {
        Err(Error::Parse(format!("`{arg}` is neither a module descriptor nor an existing file")))
    }
}

pub fn module(arg: &str, budget: &Budget) -> Result<FGModule> {
    parse_module(&inline_or_file(arg)?, budget)
}

/// `[[2,4],[6,8]]` or `{"rows":2,"cols":2,"data":[2,4,6,8]}`.
pub fn matrix(arg: &str) -> Result<IntMatrix> {
    let text = inline_or_file(arg)?;
    if text.trim_start().starts_with('[') {
        let rows: Vec<Vec<serde_json::Value>> =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Parse(format!("matrix row {} has {} entries, expected {cols}", i + 1, row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                let s = match v {
                    serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
                    serde_json::Value::String(s) => s.clone(),
                    other => return Err(Error::Parse(format!("matrix entry ({}, {}) = {other} is not an integer", i + 1, j + 1))),
                };
                data.push(s.parse().map_err(|_| Error::Parse(format!("matrix entry ({}, {}) = {s} is not an integer", i + 1, j + 1)))?);
            }
        }
        IntMatrix::new(rows.len(), cols, data)
    } else {
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))
    }
}

/// `Z`, `Z/12`, `quad:-23`, `abstract:2,3` or a JSON ring descriptor.
pub fn ring(arg: &str) -> Result<RingDescriptor> {
    let t = arg.trim();
    if t.starts_with('{') {
        return serde_json::from_str(t).map_err(|e| Error::Parse(format!("ring JSON: {e}")));
    }
    if t == "Z" {
        return Ok(RingDescriptor::Integers);
    }
    if let Some(n) = t.strip_prefix("Z/") {
        let n = n.parse().map_err(|_| Error::Parse(format!("ring `{t}`: modulus at column 3 is not an integer")))?;
        return RingDescriptor::zmod(n);
    }
    if let Some(d) = t.strip_prefix("quad:") {
        let d = d.parse().map_err(|_| Error::Parse(format!("ring `{t}`: discriminant at column 6 is not an integer")))?;
        return RingDescriptor::quadratic(d);
    }
    if let Some(g) = t.strip_prefix("abstract:") {
        let orders = g
            .split(',')
            .map(|x| x.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("ring `{t}`: class group orders from column 10 must be integers")))?;
        return RingDescriptor::abstract_group(orders, &[]);
    }
    Err(Error::Parse(format!("unknown ring `{t}` (expected Z, Z/n, quad:D, abstract:o1,o2 or JSON)")))
}

/// Comma-separated cyclic orders, all powers of one prime: `4,2`.
pub fn finite_module(arg: &str) -> Result<FiniteModule> {
    let mut orders = Vec::new();
    let mut col = 1;
    for piece in arg.split(',') {
        let trimmed = piece.trim();
        if !trimmed.is_empty() {
            orders.push(
                trimmed.parse::<u64>().map_err(|_| Error::Parse(format!("`{trimmed}` at column {col} is not a cyclic order")))?,
            );
        }
        col += piece.len() + 1;
    }
    FiniteModule::new(&orders)
}
