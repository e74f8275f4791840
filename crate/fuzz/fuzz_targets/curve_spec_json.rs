#![no_main]

use libfuzzer_sys::fuzz_target;
use syzlab::curves::CurveSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = CurveSpec::from_json(text) {
        // Accepted documents are valid; building may still fail on size limits.
        assert!(spec.validate().is_ok());
        if spec.r <= 4 && spec.d <= 8 {
            let _ = spec.build();
        }
    }
});
