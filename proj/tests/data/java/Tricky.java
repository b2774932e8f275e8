package edge;

import java.util.List;
import java.util.Map;

class Tricky {
    int compare(int a, int b) {
        boolean less = a < b;
        Object boxed = (List<Integer>) null;
        return less ? -1 : (a == b ? 0 : 1);
    }

    void shifty(int x) {
        int y = x >> 2;
        int z = x >>> 1;
        long mask = 1L << 3;
        if (x < y && z > 0) {
            y = y < z ? y : z;
        }
    }

    Map<String, List<int[]>> table() {
        return java.util.Collections.emptyMap();
    }

    String quoting() {
        char brace = '{';
        char quote = '"';
        String odd = "not a comment: /* } { */ ";
        return odd + brace + quote + '\\';
    }

    void glitch() {
        int bad = (1 + ;
        this..run(];
    }

    int survivor(int[] cells, int k) {
        int total = 0;
        for (int c : cells) {
            total += c % k;
        }
        return total;
    }
}
