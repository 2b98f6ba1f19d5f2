fn main() {
    for k in 1..=12 {
        let t = std::time::Instant::now();
        println!("{k} {} {:?}", cubefold::layers::stamp_fold_count(k), t.elapsed());
    }
}
