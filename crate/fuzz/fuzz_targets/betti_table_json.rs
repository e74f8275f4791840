#![no_main]

use libfuzzer_sys::fuzz_target;
use syzlab::koszul::BettiTable;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = BettiTable::from_json(text) {
        let again = BettiTable::from_json(&table.to_json()).expect("serialized table parses");
        assert_eq!(table, again);
        let _ = table.to_csv();
    }
});
