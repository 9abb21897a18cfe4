#![no_main]
use dualspace_cli::commands::{embed_cmd, EmbedInput};
use dualspace_cli::input::parse_embed_request;
use libfuzzer_sys::fuzz_target;

// First byte picks block or group input; the rest is "space id\nmatrix".
fuzz_target!(|data: &[u8]| {
    let Some((&mode, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let Ok((space, m)) = parse_embed_request(text) else {
        return;
    };
    let Ok(space) = space.space() else {
        return;
    };
    if space.n() + space.m() > 8 {
        return;
    }
    let input = if mode & 1 == 0 { EmbedInput::Block(m) } else { EmbedInput::Group(m) };
    if let Ok(report) = embed_cmd(space, "all", input, 0) {
        for d in report.residuals.values() {
            assert!(d.is_nan() || *d >= 0.0);
        }
    }
});
