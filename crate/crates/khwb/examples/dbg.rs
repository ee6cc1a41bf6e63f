use khwb::kh::cube::cube_complex;
use khwb::kh::homology_ranks;
use khwb::kh::scan::{scan_ranks, ScanOptions};

fn main() {
    let opts = ScanOptions { paranoid: true, ..Default::default() };
    // deterministic LCG for braid words
    let mut state = 0x12345678u64;
    let mut rnd = move |m: u64| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) % m
    };
    let mut worst: Option<(usize, String)> = None;
    for trial in 0..4000 {
        let strands = 2 + rnd(3) as usize; // 2..4
        let len = 1 + rnd(6) as usize; // 1..6
        let word: Vec<i32> = (0..len)
            .map(|_| {
                let g = 1 + rnd(strands as u64 - 1) as i32;
                if rnd(2) == 0 { g } else { -g }
            })
            .collect();
        let d = match khwb::braid_closure(&word, strands) {
            Ok(d) => d,
            Err(_) => continue,
        };
        if d.crossing_count() == 0 { continue; }
        for reduced in [true] {
            let cube = homology_ranks(&cube_complex(&d, reduced).unwrap()).unwrap();
            let bad = match scan_ranks(&d, reduced, &opts) {
                Ok(r) => r != cube,
                Err(_) => true,
            };
            if bad {
                let n = d.crossing_count();
                if worst.as_ref().is_none_or(|(wn, _)| n < *wn) {
                    worst = Some((n, format!("trial {trial} word {word:?} strands {strands} pd {}", d.render())));
                }
            }
        }
    }
    match worst {
        Some((n, info)) => println!("SMALLEST FAIL: {n} crossings: {info}"),
        None => println!("all passed"),
    }
}
