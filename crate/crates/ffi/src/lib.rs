// Copyright 2026 The aqss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! C ABI for `aqss`.
//!
//! Structures are opaque handles created by [`aqss_structure_parse`] and
//! released with [`aqss_structure_free`]. Every fallible call returns an
//! [`AqssStatus`]; on failure, [`aqss_last_error_message`] describes the most
//! recent error on the calling thread. Strings returned through `char **`
//! out-parameters are owned by the caller and released with
//! [`aqss_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use aqss::cli::exit_code;
use aqss::cover::{build_as_graph, exact_min_clique_cover};
use aqss::dsl::parse_access_structure;
use aqss::scheme::build_scheme;
use aqss::verify::{verify_scheme, VerificationMode, VerifyOptions};
use aqss::{AccessStructure, Error};

/// Result codes. Values 0 to 4 match the exit codes of the `aqss` binary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AqssStatus {
    Ok = 0,
    InputError = 1,
    VerificationFailed = 2,
    Unsupported = 3,
    ResourceCap = 4,
    NullArgument = 5,
    Panic = 6,
}

/// Verification backend selection.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AqssMode {
    Auto = 0,
    Full = 1,
    Compositional = 2,
}

/// Parsed access structure.
pub struct AqssStructure {
    inner: AccessStructure,
}

/// Options for [`aqss_verify_json`]. Obtain defaults from
/// [`aqss_verify_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AqssVerifyOptions {
    /// An [`AqssMode`] value.
    pub mode: u32,
    pub tolerance: f64,
    pub max_amplitudes: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(error: &Error) -> AqssStatus {
    match exit_code(error) {
        3 => AqssStatus::Unsupported,
        4 => AqssStatus::ResourceCap,
        _ => AqssStatus::InputError,
    }
}

/// Runs `body` with panics contained and errors recorded.
fn guard(body: impl FnOnce() -> Result<AqssStatus, (AqssStatus, String)>) -> AqssStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            AqssStatus::Panic
        }
    }
}

fn fail(error: Error) -> (AqssStatus, String) {
    (status_of(&error), error.to_string())
}

fn null(name: &str) -> (AqssStatus, String) {
    (AqssStatus::NullArgument, format!("{name} is null"))
}

unsafe fn structure<'a>(handle: *const AqssStructure) -> Result<&'a AccessStructure, (AqssStatus, String)> {
    handle.as_ref().map(|h| &h.inner).ok_or_else(|| null("structure"))
}

fn into_c_string(text: String) -> Result<*mut c_char, (AqssStatus, String)> {
    CString::new(text)
        .map(CString::into_raw)
        .map_err(|_| (AqssStatus::InputError, "output contains a NUL byte".to_string()))
}

/// Parses structure text (line syntax or JSON) into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aqss_structure_parse(text: *const c_char, out: *mut *mut AqssStructure) -> AqssStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (AqssStatus::InputError, "text is not valid UTF-8".to_string()))?;
        let inner = parse_access_structure(text).map_err(fail)?;
        *out = Box::into_raw(Box::new(AqssStructure { inner }));
        Ok(AqssStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `handle` must come from [`aqss_structure_parse`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn aqss_structure_free(handle: *mut AqssStructure) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of minimal authorized sets.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aqss_structure_set_count(handle: *const AqssStructure, out: *mut usize) -> AqssStatus {
    guard(|| {
        let s = structure(handle)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = s.len();
        Ok(AqssStatus::Ok)
    })
}

/// Minimum number of partially linked classes.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aqss_structure_lambda(handle: *const AqssStructure, out: *mut usize) -> AqssStatus {
    guard(|| {
        let s = structure(handle)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = exact_min_clique_cover(&build_as_graph(s)).map_err(fail)?.size();
        Ok(AqssStatus::Ok)
    })
}

/// Whether every pair of minimal sets overlaps, so that a plain quantum
/// threshold scheme without resident shares suffices.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aqss_structure_conventional_ok(handle: *const AqssStructure, out: *mut bool) -> AqssStatus {
    guard(|| {
        let s = structure(handle)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = s.check_pairwise_overlap().is_empty();
        Ok(AqssStatus::Ok)
    })
}

/// Builds the scheme tree for a minimum classification and returns it as
/// JSON.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn aqss_build_json(handle: *const AqssStructure, out: *mut *mut c_char) -> AqssStatus {
    guard(|| {
        let s = structure(handle)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let cover = exact_min_clique_cover(&build_as_graph(s)).map_err(fail)?;
        let tree = build_scheme(s, &cover).map_err(fail)?;
        *out = into_c_string(tree.to_json())?;
        Ok(AqssStatus::Ok)
    })
}

/// Default verification options: automatic backend, tolerance 1e-9 and the
/// library's default amplitude cap.
#[no_mangle]
pub extern "C" fn aqss_verify_options_default() -> AqssVerifyOptions {
    let d = VerifyOptions::default();
    AqssVerifyOptions {
        mode: AqssMode::Auto as u32,
        tolerance: d.tolerance,
        max_amplitudes: d.max_amplitudes,
    }
}

/// Builds and verifies the scheme, returning the report as JSON. A completed
/// verification whose overall verdict is negative still writes the report
/// and returns [`AqssStatus::VerificationFailed`].
///
/// # Safety
/// `handle` must be a live handle, `options` null or valid, and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn aqss_verify_json(
    handle: *const AqssStructure,
    options: *const AqssVerifyOptions,
    out: *mut *mut c_char,
) -> AqssStatus {
    guard(|| {
        let s = structure(handle)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let o = options
            .as_ref()
            .copied()
            .unwrap_or_else(|| aqss_verify_options_default());
        let mode = match o.mode {
            m if m == AqssMode::Auto as u32 => VerificationMode::Auto,
            m if m == AqssMode::Full as u32 => VerificationMode::Full,
            m if m == AqssMode::Compositional as u32 => VerificationMode::Compositional,
            m => return Err((AqssStatus::InputError, format!("unknown mode {m}"))),
        };
        let options = VerifyOptions {
            mode,
            tolerance: o.tolerance,
            max_amplitudes: o.max_amplitudes,
        };
        let cover = exact_min_clique_cover(&build_as_graph(s)).map_err(fail)?;
        let tree = build_scheme(s, &cover).map_err(fail)?;
        let report = verify_scheme(s, &cover, &tree, &options).map_err(fail)?;
        *out = into_c_string(report.to_json())?;
        Ok(if report.overall {
            AqssStatus::Ok
        } else {
            AqssStatus::VerificationFailed
        })
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn aqss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn aqss_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn aqss_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_codes_follow_cli_exit_codes() {
        assert_eq!(status_of(&Error::EmptyStructure), AqssStatus::InputError);
        assert_eq!(
            status_of(&Error::ResourceCap { needed: 2, cap: 1 }),
            AqssStatus::ResourceCap
        );
        assert_eq!(
            status_of(&Error::UnsupportedNode { k: 2, n: 2 }),
            AqssStatus::Unsupported
        );
    }

    #[test]
    fn panics_become_status_codes() {
        assert_eq!(guard(|| panic!("boom")), AqssStatus::Panic);
        assert!(!aqss_last_error_message().is_null());
        assert_eq!(guard(|| Ok(AqssStatus::Ok)), AqssStatus::Ok);
        assert!(aqss_last_error_message().is_null());
    }
}
