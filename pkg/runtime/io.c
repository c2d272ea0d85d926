/* Runtime I/O for natively linked IR modules.
 *
 * _read pulls the next whitespace-separated decimal integer from standard
 * input; its argument is a dummy and is ignored. _write prints its argument
 * as one decimal per line and passes the value through. The line format
 * matches the embedded interpreter exactly so outputs are byte-comparable.
 */

#include <stdio.h>

int _read(int dummy)
{
    (void)dummy;
    int value = 0;
    if (scanf("%d", &value) != 1)
        return 0; /* exhausted or malformed input: no error channel here */
    return value;
}

int _write(int value)
{
    printf("%d\n", value);
    return value;
}
