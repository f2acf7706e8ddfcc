use cumulative as core;
use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn partition(parts: Vec<u64>, sort: bool) -> PyResult<core::Partition> {
    if sort {
        core::Partition::from_unsorted(parts)
    } else {
        core::Partition::new(parts)
    }
    .map_err(value_error)
}

fn reduced(q: u64, r: Vec<usize>) -> PyResult<core::ResidueProfile> {
    core::ResidueProfile::reduced(q, r).map_err(value_error)
}

fn lists(v: Vec<core::Composition>) -> Vec<Vec<u64>> {
    v.into_iter().map(core::Composition::into_parts).collect()
}

/// Number of q'-cumulative rearrangements of a partition.
#[pyfunction]
#[pyo3(signature = (parts, q, sort = false))]
fn c_count(parts: Vec<u64>, q: u64, sort: bool) -> PyResult<BigUint> {
    let lambda = partition(parts, sort)?;
    Ok(core::c_count(&lambda, q).map_err(value_error)?.into_biguint())
}

/// Same number by exhaustive enumeration.
#[pyfunction]
#[pyo3(signature = (parts, q, sort = false))]
fn brute_c(parts: Vec<u64>, q: u64, sort: bool) -> PyResult<BigUint> {
    let lambda = partition(parts, sort)?;
    Ok(core::brute_c(&lambda, q).map_err(value_error)?.into_biguint())
}

/// |W^(q)_r| for r = (r_1, ..., r_{q-1}).
#[pyfunction]
fn w_count(q: u64, r: Vec<usize>) -> PyResult<BigUint> {
    let rp = reduced(q, r)?;
    Ok(core::w_count(&rp).map_err(value_error)?.into_biguint())
}

#[pyfunction]
fn brute_w(q: u64, r: Vec<usize>) -> PyResult<Vec<Vec<u64>>> {
    let rp = reduced(q, r)?;
    Ok(lists(core::brute_w(&rp).map_err(value_error)?))
}

#[pyfunction]
fn is_cumulative(parts: Vec<u64>, q: u64) -> PyResult<bool> {
    let d = core::Composition::new(parts).map_err(value_error)?;
    d.is_cumulative(q).map_err(value_error)
}

#[pyfunction]
fn partial_sums(parts: Vec<u64>) -> PyResult<Vec<u64>> {
    let d = core::Composition::new(parts).map_err(value_error)?;
    Ok(d.partial_sums())
}

/// Returns `(r0, [r_1, ..., r_{q-1}])`.
#[pyfunction]
fn residue_profile(parts: Vec<u64>, q: u64) -> PyResult<(usize, Vec<usize>)> {
    let d = core::Composition::new(parts).map_err(value_error)?;
    let rp = d.residue_profile(q).map_err(value_error)?;
    Ok((rp.r0(), rp.counts().to_vec()))
}

#[pyfunction]
fn scale_profile(q: u64, r: Vec<usize>, a: u64) -> PyResult<Vec<usize>> {
    let rp = reduced(q, r)?.scale(a).map_err(value_error)?;
    Ok(rp.counts().to_vec())
}

#[pyfunction]
fn scale_composition(parts: Vec<u64>, a: u64, q: u64) -> PyResult<Vec<u64>> {
    let d = core::Composition::new(parts).map_err(value_error)?;
    Ok(d.scale(a, q).map_err(value_error)?.into_parts())
}

#[pyfunction]
fn mod_inverse(a: u64, q: u64) -> PyResult<u64> {
    core::mod_inverse(a, q).map_err(value_error)
}

#[pyfunction]
fn lemma1_nonempty(q: u64, r: Vec<usize>) -> PyResult<bool> {
    core::lemma1_nonempty(&reduced(q, r)?).map_err(value_error)
}

/// Existence verdict for a prime modulus as a dict.
#[pyfunction]
#[pyo3(signature = (parts, p, sort = false))]
fn theorem1_nonzero<'py>(
    py: Python<'py>,
    parts: Vec<u64>,
    p: u64,
    sort: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let lambda = partition(parts, sort)?;
    let v = core::theorem1_nonzero(&lambda, p).map_err(value_error)?;
    let checks = v
        .checked_maximizers
        .iter()
        .map(|m| {
            let d = PyDict::new(py);
            d.set_item("a", m.a)?;
            d.set_item("b", m.b)?;
            d.set_item("scaled_weight", m.scaled_weight)?;
            d.set_item("passed", m.passed)?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let out = PyDict::new(py);
    out.set_item("nonzero", v.nonzero)?;
    out.set_item("size_divisible", v.size_divisible)?;
    out.set_item("max", v.max)?;
    out.set_item("summary", v.summary())?;
    out.set_item("checked_maximizers", checks)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (parts, p, sort = false))]
fn remark_sufficient(parts: Vec<u64>, p: u64, sort: bool) -> PyResult<bool> {
    let lambda = partition(parts, sort)?;
    core::remark_sufficient(&lambda, p).map_err(value_error)
}

/// Returns `(witness or None, method)`.
#[pyfunction]
#[pyo3(signature = (parts, q, sort = false))]
fn witness(parts: Vec<u64>, q: u64, sort: bool) -> PyResult<(Option<Vec<u64>>, String)> {
    let lambda = partition(parts, sort)?;
    let report = core::witness(&lambda, q).map_err(value_error)?;
    Ok((
        report.witness.map(core::Composition::into_parts),
        report.method.to_string(),
    ))
}

#[pyfunction]
fn witness_pattern(q: u64, r: Vec<usize>) -> PyResult<Option<Vec<u64>>> {
    let pattern = core::witness_pattern(&reduced(q, r)?).map_err(value_error)?;
    Ok(pattern.map(core::Composition::into_parts))
}

#[pyfunction]
#[pyo3(signature = (parts, sort = false))]
fn rearrangements(parts: Vec<u64>, sort: bool) -> PyResult<Vec<Vec<u64>>> {
    let lambda = partition(parts, sort)?;
    Ok(lists(core::rearrangements(&lambda).collect()))
}

#[pyfunction]
#[pyo3(signature = (parts, q, sort = false))]
fn cumulative_rearrangements(parts: Vec<u64>, q: u64, sort: bool) -> PyResult<Vec<Vec<u64>>> {
    let lambda = partition(parts, sort)?;
    Ok(lists(
        core::cumulative_rearrangements(&lambda, q).map_err(value_error)?,
    ))
}

/// All partitions of n, largest first.
#[pyfunction]
fn partitions_of(n: u64) -> Vec<Vec<u64>> {
    core::partitions_of(n).map(|p| p.parts().to_vec()).collect()
}

#[pymodule]
fn pycumulative(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(c_count, m)?)?;
    m.add_function(wrap_pyfunction!(brute_c, m)?)?;
    m.add_function(wrap_pyfunction!(w_count, m)?)?;
    m.add_function(wrap_pyfunction!(brute_w, m)?)?;
    m.add_function(wrap_pyfunction!(is_cumulative, m)?)?;
    m.add_function(wrap_pyfunction!(partial_sums, m)?)?;
    m.add_function(wrap_pyfunction!(residue_profile, m)?)?;
    m.add_function(wrap_pyfunction!(scale_profile, m)?)?;
    m.add_function(wrap_pyfunction!(scale_composition, m)?)?;
    m.add_function(wrap_pyfunction!(mod_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(lemma1_nonempty, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1_nonzero, m)?)?;
    m.add_function(wrap_pyfunction!(remark_sufficient, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(witness_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(rearrangements, m)?)?;
    m.add_function(wrap_pyfunction!(cumulative_rearrangements, m)?)?;
    m.add_function(wrap_pyfunction!(partitions_of, m)?)?;
    Ok(())
}
