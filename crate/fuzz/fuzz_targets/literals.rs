// Copyright 2026 the Discurv Authors
// SPDX-License-Identifier: Apache-2.0

#![no_main]

use discurv::doc::parse_complex;
use discurv::SpaceForm;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(z) = parse_complex(s) {
        assert!(z.re.is_finite() && z.im.is_finite());
        let printed = format!("{}{:+}i", z.re, z.im);
        assert_eq!(parse_complex(&printed), Ok(z));
    }
    let _ = s.parse::<SpaceForm>();
});
