int main() {
  int x = 3;
  if (x > 2)
    x = 1;
  else
    x = 2;
  return x;
}
