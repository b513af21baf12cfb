#![no_main]

use lgspin::cli::SpinRange;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = s.parse::<SpinRange>() {
            assert!(r.first >= 1 && r.first <= r.last);
        }
    }
});
