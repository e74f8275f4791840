#![no_main]

use libfuzzer_sys::fuzz_target;

// Arguments are NUL-separated; parsing must never panic.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let argv = std::iter::once("syzlab").chain(text.split('\0'));
    let _ = syzlab_cli::parse(argv);
});
