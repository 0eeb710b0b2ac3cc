//! C ABI over saved fgac model documents.
//!
//! Every fallible function returns an [`FgacStatus`]; on failure the message
//! is available from [`fgac_last_error_message`] on the same thread. Models
//! are opaque handles created by a load function and released with
//! [`fgac_model_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use fgac::harness::{ColumnStats, Dataset, ModelDocument};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FgacStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Io = 4,
    Model = 5,
    Panic = 6,
}

/// A loaded model document. Opaque to C.
pub struct FgacModel {
    doc: ModelDocument,
    column_names: Vec<CString>,
    class_names: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("interior nuls replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

type FfiResult<T> = Result<T, (FgacStatus, String)>;

fn guard(f: impl FnOnce() -> FfiResult<()>) -> FgacStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FgacStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FgacStatus::Panic
        }
    }
}

fn model_error(e: fgac::Error) -> (FgacStatus, String) {
    let status = match e {
        fgac::Error::Io { .. } => FgacStatus::Io,
        fgac::Error::Json(_) | fgac::Error::Model(_) => FgacStatus::Model,
        _ => FgacStatus::InvalidArgument,
    };
    (status, e.to_string())
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> FfiResult<&'a str> {
    if s.is_null() {
        return Err((FgacStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (FgacStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn wrap(doc: ModelDocument) -> FfiResult<Box<FgacModel>> {
    let to_c =
        |s: &str| CString::new(s).map_err(|_| (FgacStatus::Model, format!("name `{s}` contains a nul byte")));
    Ok(Box::new(FgacModel {
        column_names: doc
            .preprocessing
            .columns
            .iter()
            .map(|c| to_c(c.name()))
            .collect::<FfiResult<_>>()?,
        class_names: doc
            .class_names
            .iter()
            .map(|c| to_c(c))
            .collect::<FfiResult<_>>()?,
        doc,
    }))
}

unsafe fn store(out: *mut *mut FgacModel, doc: ModelDocument) -> FfiResult<()> {
    *out = Box::into_raw(wrap(doc)?);
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn fgac_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Loads a model document from a file.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fgac_model_load(path: *const c_char, out: *mut *mut FgacModel) -> FgacStatus {
    guard(|| {
        if out.is_null() {
            return Err((FgacStatus::NullPointer, "out is null".into()));
        }
        let path = read_str(path, "path")?;
        store(out, ModelDocument::load(Path::new(path)).map_err(model_error)?)
    })
}

/// Parses a model document from JSON text.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fgac_model_from_json(json: *const c_char, out: *mut *mut FgacModel) -> FgacStatus {
    guard(|| {
        if out.is_null() {
            return Err((FgacStatus::NullPointer, "out is null".into()));
        }
        let json = read_str(json, "json")?;
        store(out, ModelDocument::from_json(json).map_err(model_error)?)
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from a load function and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fgac_model_free(model: *mut FgacModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of classes, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fgac_model_class_count(model: *const FgacModel) -> usize {
    model.as_ref().map_or(0, |m| m.class_names.len())
}

/// Number of input columns a row must have, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fgac_model_column_count(model: *const FgacModel) -> usize {
    model.as_ref().map_or(0, |m| m.column_names.len())
}

/// Name of input column `index`, or null when out of range. Owned by the
/// handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fgac_model_column_name(model: *const FgacModel, index: usize) -> *const c_char {
    model
        .as_ref()
        .and_then(|m| m.column_names.get(index))
        .map_or(ptr::null(), |n| n.as_ptr())
}

/// 1 when input column `index` is nominal, 0 otherwise.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fgac_model_column_is_nominal(model: *const FgacModel, index: usize) -> i32 {
    model
        .as_ref()
        .and_then(|m| m.doc.preprocessing.columns.get(index))
        .map_or(0, |c| matches!(c, ColumnStats::Nominal { .. }) as i32)
}

/// Name of class `index`, or null when out of range. Owned by the handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fgac_model_class_name(model: *const FgacModel, index: usize) -> *const c_char {
    model
        .as_ref()
        .and_then(|m| m.class_names.get(index))
        .map_or(ptr::null(), |n| n.as_ptr())
}

fn raw_dataset(model: &FgacModel, values: &[f64], n_rows: usize) -> FfiResult<Dataset> {
    let columns = &model.doc.preprocessing.columns;
    let header: Vec<String> = columns.iter().map(|c| c.name().to_string()).collect();
    let mut records = Vec::with_capacity(n_rows);
    for row in values.chunks(columns.len()) {
        let record = columns
            .iter()
            .zip(row)
            .map(|(c, &v)| match c {
                ColumnStats::Numeric { name, .. } => {
                    if v.is_finite() {
                        Ok(v.to_string())
                    } else {
                        Err((
                            FgacStatus::InvalidArgument,
                            format!("non-finite value in column `{name}`"),
                        ))
                    }
                }
                ColumnStats::Nominal { name, categories } => {
                    if v.fract() == 0.0 && v >= 0.0 && (v as usize) < categories.len() {
                        Ok(categories[v as usize].clone())
                    } else {
                        Err((
                            FgacStatus::InvalidArgument,
                            format!(
                                "column `{name}` takes a category index below {}, got {v}",
                                categories.len()
                            ),
                        ))
                    }
                }
            })
            .collect::<FfiResult<Vec<String>>>()?;
        records.push(record);
    }
    Dataset::from_records(
        "ffi",
        &header,
        &records,
        None,
        &model.doc.preprocessing.nominal_names(),
    )
    .map_err(model_error)
}

/// Predicts `n_rows` raw rows stored row-major in `values`
/// (`n_rows × n_cols`, columns in the order of [`fgac_model_column_name`]).
/// Numeric cells are raw attribute values; nominal cells are indices into
/// the categories seen at fit time.
///
/// Writes one class id per row to `out_classes`, and when `out_degrees` is
/// not null, `n_rows × class_count` membership degrees row-major.
///
/// # Safety
/// `values` must hold `n_rows × n_cols` doubles, `out_classes` room for
/// `n_rows` entries and `out_degrees` (if not null) room for
/// `n_rows × class_count`.
#[no_mangle]
pub unsafe extern "C" fn fgac_model_predict(
    model: *const FgacModel,
    values: *const f64,
    n_rows: usize,
    n_cols: usize,
    out_classes: *mut usize,
    out_degrees: *mut f64,
) -> FgacStatus {
    guard(|| {
        let model = model
            .as_ref()
            .ok_or((FgacStatus::NullPointer, "model is null".to_string()))?;
        if n_rows == 0 {
            return Ok(());
        }
        if values.is_null() || out_classes.is_null() {
            return Err((FgacStatus::NullPointer, "values or out_classes is null".into()));
        }
        if n_cols != model.column_names.len() {
            return Err((
                FgacStatus::InvalidArgument,
                format!("model takes {} columns, got {n_cols}", model.column_names.len()),
            ));
        }
        let len = n_rows
            .checked_mul(n_cols)
            .ok_or((FgacStatus::InvalidArgument, "matrix size overflows".to_string()))?;
        let values = std::slice::from_raw_parts(values, len);
        let dataset = raw_dataset(model, values, n_rows)?;
        let predictions = model.doc.predict(&dataset).map_err(model_error)?;
        if predictions.len() != n_rows {
            return Err((
                FgacStatus::InvalidArgument,
                "a row holds a category read as missing".into(),
            ));
        }
        let classes = std::slice::from_raw_parts_mut(out_classes, n_rows);
        for (slot, p) in classes.iter_mut().zip(&predictions) {
            *slot = p.class;
        }
        if !out_degrees.is_null() {
            let k = model.class_names.len();
            let degrees = std::slice::from_raw_parts_mut(out_degrees, n_rows * k);
            for (chunk, p) in degrees.chunks_mut(k).zip(&predictions) {
                chunk.copy_from_slice(&p.degrees);
            }
        }
        Ok(())
    })
}
