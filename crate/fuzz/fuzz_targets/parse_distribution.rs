#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(d) = fixprice::io::parse_distribution(text) {
            let (lo, hi) = d.support();
            assert!(lo <= hi);
            let _ = d.quantile(0.5);
            let _ = d.cdf(0.5 * (lo + hi));
        }
    }
});
