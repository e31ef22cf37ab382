use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use qcomm_ffi::*;

fn last_error() -> String {
    let p = qcomm_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn toy(v: u8) -> *mut QcommHamiltonian {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { qcomm_hamiltonian_toy(v as _, 0, &mut h) }, QcommStatus::Ok);
    h
}

#[test]
fn detect_toy_a() {
    let h = toy(b'a');
    assert_eq!(unsafe { qcomm_hamiltonian_n(h) }, 6);
    let mut d = ptr::null_mut();
    let status = unsafe {
        qcomm_detect(
            h,
            QcommMeasure::Transport,
            QcommRegime::Infinite,
            0.0,
            ptr::null(),
            &mut d,
        )
    };
    assert_eq!(status, QcommStatus::Ok);
    assert!(qcomm_last_error_message().is_null());
    let mut labels = [99usize; 6];
    assert_eq!(
        unsafe { qcomm_detection_labels(d, labels.as_mut_ptr(), 6) },
        QcommStatus::Ok
    );
    assert_eq!(labels, [0, 0, 0, 1, 1, 1]);
    assert_eq!(unsafe { qcomm_detection_num_communities(d) }, 2);
    let mut q = 0.0;
    assert_eq!(unsafe { qcomm_detection_modularity(d, &mut q) }, QcommStatus::Ok);
    assert!((q - 0.5).abs() < 1e-12);
    assert_eq!(
        unsafe { qcomm_detection_labels(d, labels.as_mut_ptr(), 3) },
        QcommStatus::InvalidArgument
    );
    unsafe {
        qcomm_detection_free(d);
        qcomm_hamiltonian_free(h);
    }
}

#[test]
fn closeness_and_modularity() {
    let h = toy(b'a');
    let mut c = ptr::null_mut();
    let status = unsafe {
        qcomm_closeness_compute(
            h,
            QcommMeasure::Transport,
            QcommRegime::Finite,
            5.0,
            ptr::null(),
            &mut c,
        )
    };
    assert_eq!(status, QcommStatus::Ok);
    assert_eq!(unsafe { qcomm_closeness_n(c) }, 6);
    let mut buf = vec![0.0; 36];
    assert_eq!(
        unsafe { qcomm_closeness_copy(c, buf.as_mut_ptr(), 36) },
        QcommStatus::Ok
    );
    for i in 0..6 {
        for j in 0..6 {
            assert_eq!(buf[i * 6 + j], buf[j * 6 + i]);
            if (i < 3) != (j < 3) {
                assert_eq!(buf[i * 6 + j], 0.0);
            }
        }
    }
    let labels = [0usize, 0, 0, 1, 1, 1];
    let mut q = 0.0;
    assert_eq!(
        unsafe { qcomm_modularity(c, labels.as_ptr(), 6, false, &mut q) },
        QcommStatus::Ok
    );
    assert!((q - 0.5).abs() < 1e-12);
    let mut qs = 0.0;
    assert_eq!(
        unsafe { qcomm_modularity(c, labels.as_ptr(), 6, true, &mut qs) },
        QcommStatus::Ok
    );
    assert!((qs - q).abs() < 1e-12);
    unsafe {
        qcomm_closeness_free(c);
        qcomm_hamiltonian_free(h);
    }
}

#[test]
fn error_codes_and_messages() {
    let h = toy(b'a');
    let mut c = ptr::null_mut();
    let status =
        unsafe { qcomm_closeness_compute(h, QcommMeasure::Fidelity, QcommRegime::Finite, 0.0, ptr::null(), &mut c) };
    assert_eq!(status, QcommStatus::InvalidArgument);
    assert!(last_error().contains("t must be positive"));
    assert!(c.is_null());

    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { qcomm_hamiltonian_toy(b'z' as _, 0, &mut bad) },
        QcommStatus::Parse
    );
    assert_eq!(
        unsafe {
            qcomm_closeness_compute(
                ptr::null(),
                QcommMeasure::Transport,
                QcommRegime::Short,
                0.0,
                ptr::null(),
                &mut c,
            )
        },
        QcommStatus::NullPointer
    );

    let re = [0.0, 1.0, 2.0, 0.0];
    assert_eq!(
        unsafe { qcomm_hamiltonian_new(2, re.as_ptr(), ptr::null(), 1e-9, &mut bad) },
        QcommStatus::InvalidArgument
    );
    assert!(last_error().contains("not Hermitian"));

    let zero = [0.0; 4];
    let mut hz = ptr::null_mut();
    assert_eq!(
        unsafe { qcomm_hamiltonian_new(2, zero.as_ptr(), ptr::null(), 1e-9, &mut hz) },
        QcommStatus::Ok
    );
    let mut cz = ptr::null_mut();
    unsafe {
        qcomm_closeness_compute(
            hz,
            QcommMeasure::Transport,
            QcommRegime::Short,
            0.0,
            ptr::null(),
            &mut cz,
        )
    };
    let labels = [0usize, 1];
    let mut q = 0.0;
    assert_eq!(
        unsafe { qcomm_modularity(cz, labels.as_ptr(), 2, false, &mut q) },
        QcommStatus::Numerical
    );
    unsafe {
        qcomm_closeness_free(cz);
        qcomm_hamiltonian_free(hz);
        qcomm_hamiltonian_free(h);
        qcomm_hamiltonian_free(ptr::null_mut());
    }
}

#[test]
fn nmi_matches_library() {
    let x = [0usize, 0, 1, 1];
    let y = [0usize, 1, 0, 1];
    let mut v = -1.0;
    assert_eq!(unsafe { qcomm_nmi(x.as_ptr(), y.as_ptr(), 4, &mut v) }, QcommStatus::Ok);
    assert!(v.abs() < 1e-15);
    assert_eq!(unsafe { qcomm_nmi(x.as_ptr(), x.as_ptr(), 4, &mut v) }, QcommStatus::Ok);
    assert_eq!(v, 1.0);
}

#[test]
fn save_and_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("h.json").to_str().unwrap()).unwrap();
    let re = [0.5, 1.0, 0.0, 1.0, -0.25, 2.0, 0.0, 2.0, 0.0];
    let im = [0.0, 0.3, 0.0, -0.3, 0.0, -1.0, 0.0, 1.0, 0.0];
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { qcomm_hamiltonian_new(3, re.as_ptr(), im.as_ptr(), 1e-12, &mut h) },
        QcommStatus::Ok
    );
    assert_eq!(unsafe { qcomm_hamiltonian_save(h, path.as_ptr()) }, QcommStatus::Ok);
    let mut loaded = ptr::null_mut();
    assert_eq!(
        unsafe { qcomm_hamiltonian_load(path.as_ptr(), &mut loaded) },
        QcommStatus::Ok
    );

    let phases = [0.0, 1.0, 2.0];
    let (mut c1, mut c2) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        qcomm_closeness_compute(
            h,
            QcommMeasure::Purity,
            QcommRegime::Infinite,
            0.0,
            phases.as_ptr(),
            &mut c1,
        );
        qcomm_closeness_compute(
            loaded,
            QcommMeasure::Purity,
            QcommRegime::Infinite,
            0.0,
            phases.as_ptr(),
            &mut c2,
        );
    }
    let (mut b1, mut b2) = (vec![0.0; 9], vec![0.0; 9]);
    unsafe {
        qcomm_closeness_copy(c1, b1.as_mut_ptr(), 9);
        qcomm_closeness_copy(c2, b2.as_mut_ptr(), 9);
    }
    assert_eq!(b1, b2);

    let missing = CString::new(dir.path().join("missing.json").to_str().unwrap()).unwrap();
    let mut none = ptr::null_mut();
    assert_eq!(
        unsafe { qcomm_hamiltonian_load(missing.as_ptr(), &mut none) },
        QcommStatus::Io
    );
    unsafe {
        qcomm_closeness_free(c1);
        qcomm_closeness_free(c2);
        qcomm_hamiltonian_free(h);
        qcomm_hamiltonian_free(loaded);
    }
}

#[test]
fn header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qcomm.h");
    let text = std::fs::read_to_string(&header).expect("generated header");
    for name in [
        "typedef struct QcommHamiltonian QcommHamiltonian",
        "QCOMM_STATUS_OK",
        "QCOMM_MEASURE_PURITY_PHASE_AVG",
        "QCOMM_REGIME_FINITE",
        "qcomm_hamiltonian_new",
        "qcomm_closeness_compute",
        "qcomm_detect",
        "qcomm_nmi",
        "qcomm_modularity",
        "qcomm_last_error_message",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qcomm.h");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{}\"\nint main(void) {{ QcommHamiltonian *h = 0; return (int)qcomm_hamiltonian_n(h); }}\n",
            header.display()
        ),
    )
    .unwrap();
    match Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror"])
        .arg(&src)
        .status()
    {
        Ok(status) => assert!(status.success(), "header does not compile"),
        Err(_) => eprintln!("no C compiler found; skipping"),
    }
}
