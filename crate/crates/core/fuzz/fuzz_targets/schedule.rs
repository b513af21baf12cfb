#![no_main]

use lgspin::spin_lg::{AngleSchedule, OddMode};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(sched) = s.parse::<AngleSchedule>() {
            assert!(sched.alphas().iter().all(|a| a.is_finite()));
        }
        let _ = s.parse::<OddMode>();
    }
});
