#![no_main]

use lgspin::macrorealism::{certify, ExperimentRecord, DEFAULT_TOL};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(rec) = ExperimentRecord::from_json_str(text) else {
        return;
    };
    if let Ok(v) = certify(&rec, DEFAULT_TOL) {
        if let Some(c) = &v.nirm.certificate {
            assert!(c.verify(&rec));
        }
        if let Some(r) = v.nirm.witness_max_residual {
            assert!(r <= DEFAULT_TOL + 1e-9);
        }
    }
});
