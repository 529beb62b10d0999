#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(inst) = fixprice::io::parse_double_auction(text) {
            let bp = fixprice::double_auction::da_balanced_price(&inst);
            assert!(bp.qbar_b >= 0.0 && bp.qbar_s >= 0.0);
        }
    }
});
