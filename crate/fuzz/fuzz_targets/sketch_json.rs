#![no_main]

use libfuzzer_sys::fuzz_target;
use syzlab::slopes::{adjusted_slope, ray_open_hypotheses, NodalBundleSketch};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(sketch) = NodalBundleSketch::from_json(text) {
        let _ = ray_open_hypotheses(&sketch);
        for k in 0..sketch.subsheaves.len() {
            if let (Ok(mu), Ok(adj)) = (sketch.subsheaf_slope(k), adjusted_slope(&sketch, k)) {
                assert!(adj <= mu);
            }
        }
    }
});
