//! C ABI over the `beamspace` library.
//!
//! Every fallible function returns a [`BsStatus`]; on failure a message is
//! available from [`bs_last_error_message`] on the calling thread. Objects are
//! opaque handles released with their `_free` function. Panics never cross
//! the boundary and surface as `BS_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use beamspace::multiport::touchstone::parse_touchstone;
use beamspace::symmetric3::{basis_powers_lossless, reduce_symmetric, SymmetricThreePort};
use beamspace::synthesis::{
    reactive_partner, solve_loads, synthesize_psk_table_with, verify_multiplexing_with, LoadTable, PskConstellation,
    ReactivePair,
};
use beamspace::Error;
use num_complex::Complex64;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Parse = 3,
    PortCount = 4,
    NotPassive = 5,
    Asymmetric = 6,
    Singular = 7,
    RootNotFound = 8,
    NotReactive = 9,
    DegenerateBasis = 10,
    OutOfRange = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BsComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for BsComplex {
    fn from(z: Complex64) -> Self {
        BsComplex { re: z.re, im: z.im }
    }
}

impl From<BsComplex> for Complex64 {
    fn from(z: BsComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// One row of a load table. Reactances are NaN for an open circuit.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BsLoadEntry {
    pub state: u32,
    pub ratio: BsComplex,
    pub gamma1: BsComplex,
    pub gamma2: BsComplex,
    pub x1: f64,
    pub x2: f64,
    pub open1: bool,
    pub open2: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BsBasisPowers {
    pub p_b1: f64,
    pub p_b2: f64,
    pub r: f64,
}

/// Reactive basis pair returned by [`bs_reactive_partner`]. `x_ii` is NaN
/// when the partner is an open circuit.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BsReactivePair {
    pub x_i: f64,
    pub x_ii: f64,
    pub ii_open: bool,
    pub gamma_i: BsComplex,
    pub gamma_ii: BsComplex,
    pub residual: f64,
    pub roots: u32,
}

impl From<&ReactivePair> for BsReactivePair {
    fn from(p: &ReactivePair) -> Self {
        BsReactivePair {
            x_i: p.x_i,
            x_ii: p.x_ii().unwrap_or(f64::NAN),
            ii_open: p.x_ii().is_none(),
            gamma_i: p.gamma_i.into(),
            gamma_ii: p.gamma_ii.into(),
            residual: p.residual,
            roots: p.roots as u32,
        }
    }
}

/// Opaque symmetric three-port model.
pub struct BsRadiator {
    inner: SymmetricThreePort,
}

/// Opaque PSK load table together with the basis pair it was built from.
pub struct BsLoadTable {
    table: LoadTable,
    pair: ReactivePair,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> BsStatus {
    match e {
        Error::Parse { .. } => BsStatus::Parse,
        Error::PortCount { .. } => BsStatus::PortCount,
        Error::InvalidInput(_) | Error::ImpedancePole(_) => BsStatus::InvalidInput,
        Error::PortIndex { .. } => BsStatus::OutOfRange,
        Error::NotPassive { .. } => BsStatus::NotPassive,
        Error::Asymmetric { .. } => BsStatus::Asymmetric,
        Error::Singular { .. } => BsStatus::Singular,
        Error::RootNotFound { .. } => BsStatus::RootNotFound,
        Error::NotReactive { .. } => BsStatus::NotReactive,
        Error::DegenerateBasis { .. } => BsStatus::DegenerateBasis,
    }
}

struct Fail(BsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(BsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records its error message and converts panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            BsStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BsStatus::Panic
        }
    }
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn bs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses Touchstone text for a three-port, selects the frequency nearest
/// `freq_hz` (the first point when `freq_hz` is NaN), checks passivity and
/// mirror symmetry and returns the reduced model.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bs_radiator_from_touchstone(
    text: *const c_char,
    freq_hz: f64,
    passivity_tol: f64,
    symmetry_tol: f64,
    out: *mut *mut BsRadiator,
) -> BsStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Fail(BsStatus::InvalidInput, "text is not UTF-8".into()))?;
        let nets = parse_touchstone(text, 3)?;
        let net = if freq_hz.is_nan() {
            &nets[0]
        } else {
            nets.iter()
                .min_by(|a, b| {
                    let da = (a.freq().unwrap_or(f64::NAN) - freq_hz).abs();
                    let db = (b.freq().unwrap_or(f64::NAN) - freq_hz).abs();
                    da.total_cmp(&db)
                })
                .expect("parser returns at least one point")
        };
        net.check_passive(passivity_tol)?;
        let inner = reduce_symmetric(net, symmetry_tol)?;
        out.write(Box::into_raw(Box::new(BsRadiator { inner })));
        Ok(())
    })
}

/// Builds the model from its four distinct scattering parameters.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bs_radiator_from_parts(
    s00: BsComplex,
    s01: BsComplex,
    s11: BsComplex,
    s21: BsComplex,
    z0: f64,
    out: *mut *mut BsRadiator,
) -> BsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = SymmetricThreePort::from_parts(s00.into(), s01.into(), s11.into(), s21.into(), z0)?;
        out.write(Box::into_raw(Box::new(BsRadiator { inner })));
        Ok(())
    })
}

/// # Safety
/// `r` must come from a `bs_radiator_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bs_radiator_free(r: *mut BsRadiator) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Feed reflection coefficient for control loads `gamma1`, `gamma2`.
///
/// # Safety
/// `r` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bs_total_reflection(
    r: *const BsRadiator,
    gamma1: BsComplex,
    gamma2: BsComplex,
    out: *mut BsComplex,
) -> BsStatus {
    guard(|| {
        let r = borrow(r, "radiator")?;
        let g = r.inner.total_reflection(gamma1.into(), gamma2.into())?;
        write_out(out, g.into(), "out")
    })
}

/// Reactive partner of the first basis reactance `x_i` (ohms).
///
/// # Safety
/// `r` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bs_reactive_partner(r: *const BsRadiator, x_i: f64, out: *mut BsReactivePair) -> BsStatus {
    guard(|| {
        let r = borrow(r, "radiator")?;
        let p = reactive_partner(&r.inner, x_i)?;
        write_out(out, (&p).into(), "out")
    })
}

/// Control loads realizing ratio `s_r` on the basis built from `gamma_i`, `gamma_ii`.
///
/// # Safety
/// `r`, `out_gamma1` and `out_gamma2` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bs_solve_loads(
    r: *const BsRadiator,
    gamma_i: BsComplex,
    gamma_ii: BsComplex,
    s_r: BsComplex,
    out_gamma1: *mut BsComplex,
    out_gamma2: *mut BsComplex,
) -> BsStatus {
    guard(|| {
        let r = borrow(r, "radiator")?;
        if out_gamma1.is_null() || out_gamma2.is_null() {
            return Err(null("output"));
        }
        let (g1, g2) = solve_loads(&r.inner, gamma_i.into(), gamma_ii.into(), s_r.into())?;
        out_gamma1.write(g1.into());
        out_gamma2.write(g2.into());
        Ok(())
    })
}

/// Synthesizes the M-PSK load table for the partner of `x_i`.
///
/// # Safety
/// `r` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bs_synthesize_psk(
    r: *const BsRadiator,
    x_i: f64,
    m: u32,
    reactive_tol: f64,
    out: *mut *mut BsLoadTable,
) -> BsStatus {
    guard(|| {
        let r = borrow(r, "radiator")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = PskConstellation::new(m as usize)?;
        let (pair, table) = synthesize_psk_table_with(&r.inner, x_i, &c, reactive_tol)?;
        out.write(Box::into_raw(Box::new(BsLoadTable { table, pair })));
        Ok(())
    })
}

/// # Safety
/// `t` must come from [`bs_synthesize_psk`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bs_table_free(t: *mut BsLoadTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of states; 0 for a null table.
///
/// # Safety
/// `t` must be null or a valid table.
#[no_mangle]
pub unsafe extern "C" fn bs_table_len(t: *const BsLoadTable) -> usize {
    t.as_ref().map_or(0, |t| t.table.n_states())
}

/// Copies row `index` (0-based, state order) into `out`.
///
/// # Safety
/// `t` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bs_table_entry(t: *const BsLoadTable, index: usize, out: *mut BsLoadEntry) -> BsStatus {
    guard(|| {
        let t = borrow(t, "table")?;
        let e = t.table.entries.get(index).ok_or_else(|| {
            Fail(
                BsStatus::OutOfRange,
                format!("entry {index} out of range for {} states", t.table.n_states()),
            )
        })?;
        let entry = BsLoadEntry {
            state: e.state as u32,
            ratio: e.ratio.value.into(),
            gamma1: e.gamma1.into(),
            gamma2: e.gamma2.into(),
            x1: e.load1.reactance().unwrap_or(f64::NAN),
            x2: e.load2.reactance().unwrap_or(f64::NAN),
            open1: e.load1.is_open(),
            open2: e.load2.is_open(),
        };
        write_out(out, entry, "out")
    })
}

/// Feed reflection coefficient shared by every state of the table.
///
/// # Safety
/// `t` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bs_table_gamma_tot(t: *const BsLoadTable, out: *mut BsComplex) -> BsStatus {
    guard(|| {
        let t = borrow(t, "table")?;
        write_out(out, t.table.gamma_tot.into(), "out")
    })
}

/// Basis pair the table was built from.
///
/// # Safety
/// `t` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bs_table_pair(t: *const BsLoadTable, out: *mut BsReactivePair) -> BsStatus {
    guard(|| {
        let t = borrow(t, "table")?;
        write_out(out, (&t.pair).into(), "out")
    })
}

/// Lossless basis-pattern powers and their ratio.
///
/// # Safety
/// `r`, `t` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bs_basis_powers(
    r: *const BsRadiator,
    t: *const BsLoadTable,
    out: *mut BsBasisPowers,
) -> BsStatus {
    guard(|| {
        let r = borrow(r, "radiator")?;
        let t = borrow(t, "table")?;
        let p = basis_powers_lossless(&r.inner, &t.table.basis)?;
        write_out(
            out,
            BsBasisPowers {
                p_b1: p.p_b1,
                p_b2: p.p_b2,
                r: p.r,
            },
            "out",
        )
    })
}

/// Largest pattern mismatch over `samples` random symbol pairs.
///
/// # Safety
/// `r`, `t` and `out_max_residual` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bs_verify_multiplexing(
    r: *const BsRadiator,
    t: *const BsLoadTable,
    samples: usize,
    seed: u64,
    out_max_residual: *mut f64,
) -> BsStatus {
    guard(|| {
        let r = borrow(r, "radiator")?;
        let t = borrow(t, "table")?;
        let report = verify_multiplexing_with(&r.inner, &t.table.basis, &t.table, samples, seed, f64::INFINITY)?;
        write_out(out_max_residual, report.max_residual, "out_max_residual")
    })
}
