#![no_main]

use libfuzzer_sys::fuzz_target;
use syzlab::slopes::DegenerationPlan;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(plan) = DegenerationPlan::from_json(text) {
        assert!(plan.validate().is_ok());
        let again = DegenerationPlan::from_json(&plan.to_json()).expect("serialized plan parses");
        assert_eq!(plan, again);
    }
});
