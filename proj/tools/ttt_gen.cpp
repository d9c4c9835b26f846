// Regenerates data/tic_tac_toe.csv: every legal finished tic-tac-toe
// position, labeled positive when x has a three-in-a-row. Cells are listed
// row by row (a1..a3 top row, c1..c3 bottom row). Positions are complete
// games: x moved first, so x either just won (one stone ahead), o just won
// (stone counts even), or the board is a full draw.

#include <array>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr std::array<std::array<int, 3>, 8> kLines = {{{0, 1, 2},
                                                       {3, 4, 5},
                                                       {6, 7, 8},
                                                       {0, 3, 6},
                                                       {1, 4, 7},
                                                       {2, 5, 8},
                                                       {0, 4, 8},
                                                       {2, 4, 6}}};

bool has_line(const std::array<int, 9>& cells, int sym) {
    for (const auto& ln : kLines) {
        if (cells[ln[0]] == sym && cells[ln[1]] == sym && cells[ln[2]] == sym) return true;
    }
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string path = argc > 1 ? argv[1] : "data/tic_tac_toe.csv";
    // Symbol order x < o < b gives the conventional listing order.
    const char* syms = "xob";

    std::vector<std::string> positive, negative;
    std::array<int, 9> cells{};
    for (int board = 0; board < 19683; ++board) {
        int v = board;
        int nx = 0, no = 0;
        for (int i = 8; i >= 0; --i) {
            cells[i] = v % 3;
            v /= 3;
        }
        for (int i = 0; i < 9; ++i) {
            nx += cells[i] == 0 ? 1 : 0;
            no += cells[i] == 1 ? 1 : 0;
        }
        const bool xwin = has_line(cells, 0);
        const bool owin = has_line(cells, 1);

        bool legal = false;
        if (xwin && !owin && nx == no + 1) legal = true;
        if (owin && !xwin && nx == no) legal = true;
        if (!xwin && !owin && nx == 5 && no == 4) legal = true;
        if (!legal) continue;

        std::string row;
        for (int i = 0; i < 9; ++i) {
            row += syms[cells[i]];
            row += ',';
        }
        row += xwin ? "positive" : "negative";
        (xwin ? positive : negative).push_back(std::move(row));
    }

    std::ofstream out(path);
    if (!out) {
        std::cerr << "cannot open " << path << " for writing\n";
        return 1;
    }
    out << "a1,a2,a3,b1,b2,b3,c1,c2,c3,class\n";
    for (const auto& r : positive) out << r << '\n';
    for (const auto& r : negative) out << r << '\n';

    std::cout << "wrote " << path << ": " << positive.size() + negative.size() << " rows ("
              << positive.size() << " positive, " << negative.size() << " negative)\n";
    return 0;
}
