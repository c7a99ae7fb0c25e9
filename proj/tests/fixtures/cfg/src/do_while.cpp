int main() {
  int n = 3;
  do {
    n--;
  } while (n > 0);
  return n;
}
