#include <cstdio>

int main() {
    std::puts("henonlab: CLI under construction");
    return 0;
}
