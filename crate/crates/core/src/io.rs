//! JSON persistence for the domain types.
//!
//! Complex numbers are encoded as `[re, im]` pairs; serde_json prints the
//! shortest round-trip decimal form, so save → load is bit-exact. Decode
//! errors carry a JSON-pointer-style path into the offending document.

use std::fs;
use std::path::Path;

use num_complex::Complex;
use serde_json::{json, Map, Value};

use crate::algebra::{AlgebraDescriptor, AlgebraElement};
use crate::error::{Error, Result};
use crate::frames::FrameSystem;
use crate::hilbert::{ModuleOperator, ModuleSpace, ModuleVector};
use crate::linalg::CMatrix;
use crate::report::VerificationReport;
use crate::scalar::{to_f64, Real};

// ---------------------------------------------------------------- helpers

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::parse(path, "expected an object"))
}

fn get<'a>(m: &'a Map<String, Value>, name: &str, path: &str) -> Result<&'a Value> {
    m.get(name)
        .ok_or_else(|| Error::parse(format!("{path}/{name}"), "missing field"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::parse(path, "expected an array"))
}

fn as_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::parse(path, "expected a number"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::parse(path, "expected a nonnegative integer"))
}

fn complex_to_value<T: Real>(z: &Complex<T>) -> Value {
    json!([to_f64(z.re), to_f64(z.im)])
}

fn complex_from_value<T: Real>(v: &Value, path: &str) -> Result<Complex<T>> {
    let pair = as_array(v, path)?;
    if pair.len() != 2 {
        return Err(Error::parse(path, "complex number must be a [re, im] pair"));
    }
    let re = as_f64(&pair[0], &format!("{path}/0"))?;
    let im = as_f64(&pair[1], &format!("{path}/1"))?;
    Ok(Complex::new(
        T::from_f64(re).ok_or_else(|| Error::parse(path, "re out of range"))?,
        T::from_f64(im).ok_or_else(|| Error::parse(path, "im out of range"))?,
    ))
}

// ----------------------------------------------------------- descriptors

pub fn descriptor_to_value(d: &AlgebraDescriptor) -> Value {
    json!({ "block_dims": d.block_dims() })
}

pub fn descriptor_from_value(v: &Value, path: &str) -> Result<AlgebraDescriptor> {
    let obj = as_object(v, path)?;
    let dims_v = get(obj, "block_dims", path)?;
    let dims_path = format!("{path}/block_dims");
    let dims = as_array(dims_v, &dims_path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_usize(x, &format!("{dims_path}/{i}")))
        .collect::<Result<Vec<_>>>()?;
    AlgebraDescriptor::new(dims).map_err(|e| Error::parse(dims_path, e.to_string()))
}

// -------------------------------------------------------------- elements

pub fn element_to_value<T: Real>(a: &AlgebraElement<T>) -> Value {
    let blocks: Vec<Value> = a
        .blocks()
        .iter()
        .map(|b| {
            let rows: Vec<Value> = (0..b.nrows())
                .map(|r| {
                    Value::Array((0..b.ncols()).map(|c| complex_to_value(&b[(r, c)])).collect())
                })
                .collect();
            Value::Array(rows)
        })
        .collect();
    json!({ "blocks": blocks })
}

pub fn element_from_value<T: Real>(
    v: &Value,
    desc: &AlgebraDescriptor,
    path: &str,
) -> Result<AlgebraElement<T>> {
    let obj = as_object(v, path)?;
    let blocks_v = get(obj, "blocks", path)?;
    let blocks_path = format!("{path}/blocks");
    let blocks_arr = as_array(blocks_v, &blocks_path)?;
    if blocks_arr.len() != desc.num_blocks() {
        return Err(Error::parse(
            blocks_path,
            format!("expected {} blocks, got {}", desc.num_blocks(), blocks_arr.len()),
        ));
    }
    let mut blocks = Vec::with_capacity(blocks_arr.len());
    for (j, (bv, &k)) in blocks_arr.iter().zip(desc.block_dims()).enumerate() {
        let bpath = format!("{blocks_path}/{j}");
        let rows = as_array(bv, &bpath)?;
        if rows.len() != k {
            return Err(Error::parse(bpath, format!("expected {k} rows, got {}", rows.len())));
        }
        let mut m = CMatrix::<T>::zeros(k, k);
        for (r, rv) in rows.iter().enumerate() {
            let rpath = format!("{bpath}/{r}");
            let cols = as_array(rv, &rpath)?;
            if cols.len() != k {
                return Err(Error::parse(rpath, format!("expected {k} columns, got {}", cols.len())));
            }
            for (c, zv) in cols.iter().enumerate() {
                m[(r, c)] = complex_from_value(zv, &format!("{rpath}/{c}"))?;
            }
        }
        blocks.push(m);
    }
    AlgebraElement::from_blocks(desc.clone(), blocks)
        .map_err(|e| Error::parse(blocks_path, e.to_string()))
}

// ---------------------------------------------------------------- spaces

pub fn space_to_value(s: &ModuleSpace) -> Value {
    json!({ "descriptor": descriptor_to_value(s.descriptor()), "rank": s.rank() })
}

pub fn space_from_value(v: &Value, path: &str) -> Result<ModuleSpace> {
    let obj = as_object(v, path)?;
    let desc = descriptor_from_value(get(obj, "descriptor", path)?, &format!("{path}/descriptor"))?;
    let rank = as_usize(get(obj, "rank", path)?, &format!("{path}/rank"))?;
    ModuleSpace::new(desc, rank).map_err(|e| Error::parse(format!("{path}/rank"), e.to_string()))
}

// --------------------------------------------------------------- vectors

pub fn vector_to_value<T: Real>(x: &ModuleVector<T>) -> Value {
    json!({
        "space": space_to_value(x.space()),
        "coords": x.coords().iter().map(element_to_value).collect::<Vec<_>>(),
    })
}

pub fn vector_from_value<T: Real>(v: &Value, path: &str) -> Result<ModuleVector<T>> {
    let obj = as_object(v, path)?;
    let space = space_from_value(get(obj, "space", path)?, &format!("{path}/space"))?;
    let coords_path = format!("{path}/coords");
    let coords_v = as_array(get(obj, "coords", path)?, &coords_path)?;
    let coords = coords_v
        .iter()
        .enumerate()
        .map(|(i, cv)| element_from_value(cv, space.descriptor(), &format!("{coords_path}/{i}")))
        .collect::<Result<Vec<_>>>()?;
    ModuleVector::from_coords(space, coords).map_err(|e| Error::parse(coords_path, e.to_string()))
}

// ------------------------------------------------------------- operators

pub fn operator_to_value<T: Real>(op: &ModuleOperator<T>) -> Value {
    let n = op.domain().rank();
    let m = op.codomain().rank();
    let entries: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..m).map(|l| element_to_value(op.entry(i, l))).collect()))
        .collect();
    json!({
        "descriptor": descriptor_to_value(op.domain().descriptor()),
        "domain_rank": n,
        "codomain_rank": m,
        "entries": entries,
    })
}

pub fn operator_from_value<T: Real>(v: &Value, path: &str) -> Result<ModuleOperator<T>> {
    let obj = as_object(v, path)?;
    let desc = descriptor_from_value(get(obj, "descriptor", path)?, &format!("{path}/descriptor"))?;
    let n = as_usize(get(obj, "domain_rank", path)?, &format!("{path}/domain_rank"))?;
    let m = as_usize(get(obj, "codomain_rank", path)?, &format!("{path}/codomain_rank"))?;
    let entries_path = format!("{path}/entries");
    let rows = as_array(get(obj, "entries", path)?, &entries_path)?;
    if rows.len() != n {
        return Err(Error::parse(
            entries_path,
            format!("expected {n} rows, got {}", rows.len()),
        ));
    }
    let mut entries = Vec::with_capacity(n * m);
    for (i, rv) in rows.iter().enumerate() {
        let rpath = format!("{entries_path}/{i}");
        let cols = as_array(rv, &rpath)?;
        if cols.len() != m {
            return Err(Error::parse(rpath, format!("expected {m} columns, got {}", cols.len())));
        }
        for (l, ev) in cols.iter().enumerate() {
            entries.push(element_from_value(ev, &desc, &format!("{rpath}/{l}"))?);
        }
    }
    let domain = ModuleSpace::new(desc.clone(), n)
        .map_err(|e| Error::parse(format!("{path}/domain_rank"), e.to_string()))?;
    let codomain = ModuleSpace::new(desc, m)
        .map_err(|e| Error::parse(format!("{path}/codomain_rank"), e.to_string()))?;
    ModuleOperator::from_entries(domain, codomain, entries)
        .map_err(|e| Error::parse(entries_path, e.to_string()))
}

// ---------------------------------------------------------------- frames

pub fn frame_to_value<T: Real>(f: &FrameSystem<T>) -> Value {
    json!({
        "space": space_to_value(f.space()),
        "vectors": f.vectors().iter().map(vector_to_value).collect::<Vec<_>>(),
    })
}

pub fn frame_from_value<T: Real>(v: &Value, path: &str) -> Result<FrameSystem<T>> {
    let obj = as_object(v, path)?;
    let space = space_from_value(get(obj, "space", path)?, &format!("{path}/space"))?;
    let vectors_path = format!("{path}/vectors");
    let vectors = as_array(get(obj, "vectors", path)?, &vectors_path)?
        .iter()
        .enumerate()
        .map(|(i, vv)| vector_from_value(vv, &format!("{vectors_path}/{i}")))
        .collect::<Result<Vec<_>>>()?;
    FrameSystem::build(space, vectors).map_err(|e| Error::parse(vectors_path, e.to_string()))
}

// --------------------------------------------------------------- reports

pub fn reports_to_value(entries: &[VerificationReport]) -> Value {
    json!({
        "version": 1,
        "entries": entries,
    })
}

pub fn reports_from_value(v: &Value, path: &str) -> Result<Vec<VerificationReport>> {
    let obj = as_object(v, path)?;
    let entries = get(obj, "entries", path)?;
    serde_json::from_value(entries.clone())
        .map_err(|e| Error::parse(format!("{path}/entries"), e.to_string()))
}

// ------------------------------------------------------------ file layer

pub fn save_value(path: impl AsRef<Path>, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)
        .map_err(|e| Error::parse("/", e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn load_value(path: impl AsRef<Path>) -> Result<Value> {
    let text = fs::read_to_string(&path)?;
    serde_json::from_str(&text).map_err(|e| Error::parse("/", e.to_string()))
}

pub fn save_operator<T: Real>(path: impl AsRef<Path>, op: &ModuleOperator<T>) -> Result<()> {
    save_value(path, &operator_to_value(op))
}

pub fn load_operator<T: Real>(path: impl AsRef<Path>) -> Result<ModuleOperator<T>> {
    operator_from_value(&load_value(path)?, "")
}

pub fn save_vector<T: Real>(path: impl AsRef<Path>, x: &ModuleVector<T>) -> Result<()> {
    save_value(path, &vector_to_value(x))
}

pub fn load_vector<T: Real>(path: impl AsRef<Path>) -> Result<ModuleVector<T>> {
    vector_from_value(&load_value(path)?, "")
}

pub fn save_frame<T: Real>(path: impl AsRef<Path>, f: &FrameSystem<T>) -> Result<()> {
    save_value(path, &frame_to_value(f))
}

pub fn load_frame<T: Real>(path: impl AsRef<Path>) -> Result<FrameSystem<T>> {
    frame_from_value(&load_value(path)?, "")
}

pub fn save_reports(path: impl AsRef<Path>, entries: &[VerificationReport]) -> Result<()> {
    save_value(path, &reports_to_value(entries))
}

pub fn load_reports(path: impl AsRef<Path>) -> Result<Vec<VerificationReport>> {
    reports_from_value(&load_value(path)?, "")
}
