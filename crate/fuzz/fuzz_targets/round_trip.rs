#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(inst) = fixprice::io::parse_bilateral(text) else {
        return;
    };
    let again = fixprice::io::parse_bilateral(&fixprice::io::bilateral_to_json(&inst))
        .expect("serialised instance parses");
    assert_eq!(again.buyer().knots(), inst.buyer().knots());
    assert_eq!(again.seller().knots(), inst.seller().knots());
});
