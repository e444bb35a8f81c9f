use std::ffi::{CStr, CString};
use std::ptr;

use xisim_ffi::*;

fn last_error() -> String {
    let p = xisim_last_error_message();
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { xisim_string_free(p) };
    s
}

fn oracle(text: &str) -> *mut XisimOracle {
    let src = CString::new(text).unwrap();
    let mut o = ptr::null_mut();
    assert_eq!(unsafe { xisim_oracle_parse(src.as_ptr(), &mut o) }, XisimStatus::Ok);
    o
}

const BELL_MODEL: &str = "\
node Lambda 2 latent
node X 2
node Y 2
node A 2
node B 2
edge Lambda -> A
edge X -> A
edge Lambda -> B
edge Y -> B
cpt Lambda
: 1/2 1/2
cpt X
: 1/2 1/2
cpt Y
: 1/2 1/2
cpt A | X Lambda
0 0 : 1 0
0 1 : 0 1
1 0 : 1 0
1 1 : 0 1
cpt B | Lambda Y
0 0 : 1 0
0 1 : 1 0
1 0 : 0 1
1 1 : 0 1
";

#[test]
fn search_count_and_descent() {
    let o = oracle("n=3\n110\n");
    let (mut found, mut sol, mut apps) = (false, 0u64, 0usize);
    assert_eq!(unsafe { xisim_np_search(o, &mut found, &mut sol, &mut apps) }, XisimStatus::Ok);
    assert!(found);
    assert_eq!((sol, apps), (0b110, 3));

    let mut count = 0;
    assert_eq!(unsafe { xisim_sharp_p_count(o, &mut count) }, XisimStatus::Ok);
    assert_eq!(count, 1);

    let mut calls = 0;
    assert_eq!(
        unsafe { xisim_search_via_counting(o, &mut found, &mut sol, &mut calls) },
        XisimStatus::Ok
    );
    assert_eq!((found, sol, calls), (true, 0b110, 3));
    unsafe { xisim_oracle_free(o) };
}

#[test]
fn table_constructor_and_multiple_solutions() {
    let table = [0u8, 1, 1, 0];
    let mut o = ptr::null_mut();
    assert_eq!(
        unsafe { xisim_oracle_from_table(2, table.as_ptr(), table.len(), &mut o) },
        XisimStatus::Ok
    );
    let (mut found, mut sol, mut apps) = (false, 0u64, 0usize);
    assert_eq!(
        unsafe { xisim_np_search(o, &mut found, &mut sol, &mut apps) },
        XisimStatus::MultipleSolutions
    );
    assert!(!last_error().is_empty());
    unsafe { xisim_oracle_free(o) };

    assert_eq!(
        unsafe { xisim_oracle_from_table(2, table.as_ptr(), 3, &mut o) },
        XisimStatus::InvalidArgument
    );
}

#[test]
fn errors_set_status_and_message() {
    let mut o = ptr::null_mut();
    let src = CString::new("n=3\n11\n").unwrap();
    assert_eq!(unsafe { xisim_oracle_parse(src.as_ptr(), &mut o) }, XisimStatus::Parse);
    assert!(last_error().contains("line 2"));
    assert!(o.is_null());

    assert_eq!(unsafe { xisim_oracle_parse(ptr::null(), &mut o) }, XisimStatus::NullPointer);
    let mut count = 0;
    assert_eq!(unsafe { xisim_sharp_p_count(ptr::null(), &mut count) }, XisimStatus::NullPointer);

    let big = oracle("n=20\n");
    assert_eq!(unsafe { xisim_sharp_p_count(big, &mut count) }, XisimStatus::TooLarge);
    unsafe { xisim_oracle_free(big) };
}

#[test]
fn model_round_trip_and_dsep() {
    let src = CString::new(BELL_MODEL).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { xisim_model_parse(src.as_ptr(), &mut m) }, XisimStatus::Ok);

    let text = unsafe { xisim_model_to_string(m) };
    let s = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_string();
    unsafe { xisim_string_free(text) };
    assert_eq!(s, BELL_MODEL);

    let c = |s: &str| CString::new(s).unwrap();
    let mut sep = false;
    let (a, y, empty) = (c("A"), c("Y"), c(""));
    assert_eq!(
        unsafe { xisim_d_separated(m, a.as_ptr(), y.as_ptr(), empty.as_ptr(), &mut sep) },
        XisimStatus::Ok
    );
    assert!(sep);
    let (b, lx) = (c("B"), c("Lambda,X"));
    assert_eq!(
        unsafe { xisim_d_separated(m, a.as_ptr(), b.as_ptr(), lx.as_ptr(), &mut sep) },
        XisimStatus::Ok
    );
    assert!(sep);
    let q = c("Q");
    assert_eq!(
        unsafe { xisim_d_separated(m, a.as_ptr(), q.as_ptr(), empty.as_ptr(), &mut sep) },
        XisimStatus::InvalidArgument
    );
    unsafe { xisim_model_free(m) };
}

#[test]
fn chsh_and_signaling() {
    let mut v = 0.0;
    assert_eq!(unsafe { xisim_chsh(XisimResource::Classical, ptr::null(), &mut v) }, XisimStatus::Ok);
    assert_eq!(v, 2.0);
    assert_eq!(unsafe { xisim_chsh(XisimResource::PrBox, ptr::null(), &mut v) }, XisimStatus::Ok);
    assert_eq!(v, 4.0);
    assert_eq!(unsafe { xisim_chsh(XisimResource::Quantum, ptr::null(), &mut v) }, XisimStatus::Ok);
    assert!((v - 8f64.sqrt()).abs() < 1e-12);
    let aligned = [0.0; 4];
    assert_eq!(unsafe { xisim_chsh(XisimResource::Quantum, aligned.as_ptr(), &mut v) }, XisimStatus::Ok);
    assert!((v - 2.0).abs() < 1e-12);

    let mut d = 1.0;
    assert_eq!(unsafe { xisim_bell_signaling_advantage(XisimAction::Weinberg, &mut d) }, XisimStatus::Ok);
    assert!((d - 0.5).abs() < 1e-12);
    for a in [XisimAction::Identity, XisimAction::PauliX, XisimAction::Hadamard] {
        assert_eq!(unsafe { xisim_bell_signaling_advantage(a, &mut d) }, XisimStatus::Ok);
        assert!(d < 1e-12);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(xisim_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
