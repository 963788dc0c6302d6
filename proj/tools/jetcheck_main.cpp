#include <cstdio>

int main() {
  std::puts("jetcheck: CLI not wired yet");
  return 0;
}
