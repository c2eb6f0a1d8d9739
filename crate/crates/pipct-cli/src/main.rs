fn main() {
    println!("pipct");
}
