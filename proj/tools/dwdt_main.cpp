#include <cstdio>

int main() {
  std::puts("dwdt cli placeholder");
  return 0;
}
