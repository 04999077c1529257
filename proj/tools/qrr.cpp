// placeholder main; replaced once the corpus front end lands
int main() { return 0; }
