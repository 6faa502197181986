fn main() {
    // acceptance criteria runner; filled in below
}
