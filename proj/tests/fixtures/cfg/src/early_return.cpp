int f(int v) { return v * 2; }
int main() {
  int k = f(4);
  if (k == 8)
    return 0;
  k = f(k);
  return k;
}
