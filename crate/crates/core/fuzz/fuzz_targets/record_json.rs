#![no_main]

use lgspin::macrorealism::ExperimentRecord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        // rejected records are fine; accepted ones must survive a round trip
        if let Ok(rec) = ExperimentRecord::from_json_str(text) {
            let back = ExperimentRecord::from_json_str(&rec.to_json_string()).unwrap();
            assert_eq!(back, rec);
        }
    }
});
