#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(inst) = fixprice::io::parse_bilateral(text) {
            let r = inst.trade_probability();
            assert!((0.0..=1.0).contains(&r));
            let _ = inst.balanced_price();
            let _ = inst.median_price();
        }
    }
});
