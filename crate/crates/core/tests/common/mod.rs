use hpfold::lattice::Point3;
use hpfold::{parse_sequence, HpSequence, Residue};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Straight double loop over all pairs, written from the definitions.
pub fn naive(coords: &[Point3], seq: &HpSequence) -> (u32, u32, u32, u32, u32, f64) {
    let h: Vec<bool> = seq.residues().iter().map(|r| *r == Residue::H).collect();
    let n = coords.len();
    let dist = |a: Point3, b: Point3| ((a.x - b.x).abs() + (a.y - b.y).abs() + (a.z - b.z).abs()) as u32;
    let (mut hh, mut ov, mut hp, mut hd) = (0, 0, 0, 0);
    for i in 0..n {
        for j in 0..n {
            if j >= i + 2 && coords[i] == coords[j] {
                ov += 1;
            }
            if j < i + 3 {
                continue;
            }
            let d = dist(coords[i], coords[j]);
            if d == 1 && h[i] && h[j] {
                hh += 1;
            }
            if d == 1 && h[i] != h[j] {
                hp += 1;
            }
            if h[i] && h[j] && (i % 2) != (j % 2) {
                hd += d;
            }
        }
    }
    let even = (0..n).filter(|&i| h[i] && i % 2 == 0).count() as u32;
    let odd = (0..n).filter(|&i| h[i] && i % 2 == 1).count() as u32;
    let thh = 4 * even.min(odd) + 2;
    let r = hh as f64 / (1.0 + ov as f64);
    let e = -(r * r + 1.0 / (1.0 + hp as f64) + 2.0 * thh as f64 / (1.0 + hd as f64));
    (hh, ov, hp, hd, thh, e)
}

pub fn random_seq(n: usize, rng: &mut ChaCha8Rng) -> HpSequence {
    let s: String = (0..n).map(|_| if rng.gen_bool(0.5) { 'h' } else { 'p' }).collect();
    parse_sequence(&s).unwrap()
}
