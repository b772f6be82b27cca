use std::ffi::{CStr, CString};
use std::ptr;

use operadic_ffi::*;

fn last_error() -> String {
    let p = operadic_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(operadic_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn bm_handle_lifecycle() {
    let mut b = ptr::null_mut();
    unsafe {
        assert_eq!(operadic_bm_new(-2, 8, &mut b), OperadicStatus::Ok);
        for n in 2..=8 {
            let mut d = 0;
            assert_eq!(
                operadic_bm_generator_degree(b, n, &mut d),
                OperadicStatus::Ok
            );
            assert_eq!(d, -(n as i64));
        }
        let mut d = 0;
        assert_eq!(
            operadic_bm_generator_degree(b, 9, &mut d),
            OperadicStatus::InvalidArgument
        );
        assert!(last_error().contains("outside"));
        assert_eq!(operadic_bm_certify(b), OperadicStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(operadic_bm_to_json(b, &mut s), OperadicStatus::Ok);
        let v: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(v["m"], -2);
        operadic_string_free(s);
        operadic_bm_free(b);
        operadic_bm_free(ptr::null_mut());
        operadic_string_free(ptr::null_mut());
    }
}

#[test]
fn null_and_invalid_inputs() {
    unsafe {
        assert_eq!(
            operadic_bm_new(0, 5, ptr::null_mut()),
            OperadicStatus::NullPointer
        );
        assert_eq!(
            operadic_bm_certify(ptr::null()),
            OperadicStatus::NullPointer
        );
        let mut b = ptr::null_mut();
        assert_eq!(
            operadic_bm_new(0, 1, &mut b),
            OperadicStatus::InvalidArgument
        );
        assert!(b.is_null());
    }
}

#[test]
fn ainf_and_moduli() {
    assert_eq!(operadic_ainf_certify(6), OperadicStatus::Ok);
    let (mut a, mut u) = (0, 0);
    unsafe {
        assert_eq!(
            operadic_moduli_count(2, 2, 1 << 20, &mut a, &mut u),
            OperadicStatus::Ok
        );
        assert_eq!((a, u), (28, 12));
        assert_eq!(
            operadic_moduli_count(1, 5, 1 << 20, &mut a, &mut u),
            OperadicStatus::Ok
        );
        assert_eq!((a, u), (5, 4));
        assert_eq!(
            operadic_moduli_count(2, 2, 10, &mut a, &mut u),
            OperadicStatus::BudgetExceeded
        );
        assert!(last_error().contains("budget"));
    }
}

#[test]
fn run_returns_certificate_and_exit_code() {
    let args: Vec<CString> = ["moduli", "enumerate", "--n", "1", "--q", "3", "--unital"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<*const std::ffi::c_char> = args.iter().map(|s| s.as_ptr()).collect();
    let (mut json, mut code) = (ptr::null_mut(), -1);
    unsafe {
        assert_eq!(
            operadic_run(ptrs.len(), ptrs.as_ptr(), &mut json, &mut code),
            OperadicStatus::Ok
        );
        assert_eq!(code, 0);
        let v: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(v["result"]["counts"]["unital"], 2);
        operadic_string_free(json);

        let bad = [CString::new("nonsense").unwrap()];
        let p = [bad[0].as_ptr()];
        assert_eq!(
            operadic_run(1, p.as_ptr(), &mut json, &mut code),
            OperadicStatus::InvalidArgument
        );
        assert_eq!(code, 2);
        assert!(json.is_null());
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = format!("{dir}/include/operadic.h");
    assert!(std::path::Path::new(&header).exists());
    let tmp = std::env::temp_dir().join(format!("operadic_header_{}.c", std::process::id()));
    std::fs::write(
        &tmp,
        "#include \"operadic.h\"\nint main(void) { OperadicBm *b = 0; (void)b; return operadic_ainf_certify(3) == OPERADIC_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let status = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(format!("{dir}/include"))
        .arg(&tmp)
        .status();
    let _ = std::fs::remove_file(&tmp);
    match status {
        Ok(s) => assert!(s.success(), "header does not compile"),
        Err(_) => eprintln!("no C compiler; skipped"),
    }
}
