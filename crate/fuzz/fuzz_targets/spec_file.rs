#![no_main]

use exchange_budget::specfile::{load_specs, render_technologies};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // anything that loads must survive a render/load round trip
    if let Ok(doc) = load_specs(text) {
        let again =
            load_specs(&render_technologies(&doc.technologies)).expect("rendered catalog loads");
        assert_eq!(again.technologies, doc.technologies);
    }
});
